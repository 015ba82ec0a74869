"""The oscillator Lie algebras g_lambda and their distinguished tensors.

Basis order is fixed everywhere: ``e-1, e0, e1, ê1, ..., en, ên``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import Basis, BilinearForm, BilinearMap, LinearMap
from .exactmath import Coeff, Poly, simplify, to_scalar

E_M1 = 0  # e_{-1}
E_0 = 1  # e_0


def e(j: int) -> int:
    """Index of e_j (j >= 1)."""
    return 2 * j


def ec(j: int) -> int:
    """Index of ê_j (j >= 1)."""
    return 2 * j + 1


@dataclass(frozen=True)
class Lambda:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(to_scalar(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("lambda needs at least one entry")
        if vals[0] <= 0:
            raise ValueError("lambda entries must be positive")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError("lambda entries must be nondecreasing")

    @classmethod
    def parse(cls, text: str) -> "Lambda":
        try:
            return cls(tuple(Fraction(x.strip()) for x in text.split(",")))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid lambda {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def dim(self) -> int:
        return 2 * self.n + 2

    def is_strict(self) -> bool:
        return all(a < b for a, b in zip(self.values, self.values[1:]))

    def __str__(self):
        return ",".join(str(v) for v in self.values)


def _lam(lam) -> Lambda:
    if isinstance(lam, Lambda):
        return lam
    if isinstance(lam, str):
        return Lambda.parse(lam)
    return Lambda(tuple(lam))


def oscillator_basis(n: int) -> Basis:
    labels = ["e-1", "e0"]
    for j in range(1, n + 1):
        labels += [f"e{j}", f"ê{j}"]
    return Basis(tuple(labels))


def s_indices(n: int) -> list[int]:
    return list(range(2, 2 * n + 2))


def build_oscillator(lam) -> BilinearMap:
    lam = _lam(lam)
    entries = []
    for j, lj in enumerate(lam.values, start=1):
        for a, b, k, c in (
            (E_M1, e(j), ec(j), lj),
            (E_M1, ec(j), e(j), -lj),
            (e(j), ec(j), E_0, Fraction(1)),
        ):
            entries.append((a, b, k, c))
            entries.append((b, a, k, -c))
    return BilinearMap(oscillator_basis(lam.n), entries)


def build_k_lambda(lam) -> BilinearForm:
    lam = _lam(lam)
    d = lam.dim
    m = [[Fraction(0)] * d for _ in range(d)]
    m[E_M1][E_0] = m[E_0][E_M1] = Fraction(1)
    for j, lj in enumerate(lam.values, start=1):
        m[e(j)][e(j)] = m[ec(j)][ec(j)] = 1 / lj
    return BilinearForm(oscillator_basis(lam.n), tuple(map(tuple, m)), "symmetric")


def e_minus1_square_form(n: int) -> BilinearForm:
    """e_{-1}^* ⊙ e_{-1}^*, i.e. 2 at (e-1, e-1)."""
    d = 2 * n + 2
    m = [[Fraction(0)] * d for _ in range(d)]
    m[E_M1][E_M1] = Fraction(2)
    return BilinearForm(oscillator_basis(n), tuple(map(tuple, m)), "symmetric")


def build_omega(n: int | Lambda) -> BilinearForm:
    if isinstance(n, Lambda):
        n = n.n
    d = 2 * n + 2
    m = [[Fraction(0)] * d for _ in range(d)]
    for j in range(1, n + 1):
        m[e(j)][ec(j)] = Fraction(1)
        m[ec(j)][e(j)] = Fraction(-1)
    return BilinearForm(oscillator_basis(n), tuple(map(tuple, m)), "skew")


def build_J_mu(mu: Sequence, n: int | None = None) -> LinearMap:
    mu = [simplify(m) for m in mu]
    if n is not None and len(mu) != n:
        raise ValueError(f"mu has length {len(mu)}, expected {n}")
    n = len(mu)
    d = 2 * n + 2
    images = [[Fraction(0)] * d for _ in range(d)]
    for j, mj in enumerate(mu, start=1):
        images[e(j)][ec(j)] = mj
        images[ec(j)][e(j)] = -mj
    return LinearMap.from_images(oscillator_basis(n), images)


def is_generic(lam) -> bool:
    lam = _lam(lam)
    if not lam.is_strict():
        return False
    v = lam.values
    return all(v[k] != v[i] + v[j] for i, j, k in combinations(range(lam.n), 3))


def poisson_product(lam, c: Coeff | int | str = "c") -> BilinearMap:
    """Symmetric product whose only nonzero entry is e_{-1} o e_{-1} = c e_0."""
    lam = _lam(lam)
    if isinstance(c, str):
        c = Poly.var(c)
    return BilinearMap(oscillator_basis(lam.n), [(E_M1, E_M1, E_0, c)])


def leibniz_product(lam, c: Coeff | int | str = "c") -> BilinearMap:
    """u.v = [u, v] + u o v."""
    return build_oscillator(lam) + poisson_product(lam, c)


def restriction_to_S(lin: LinearMap, n: int) -> tuple[tuple, ...]:
    """2n x 2n block of a linear map on S (rows/cols e1, ê1, ...)."""
    idx = s_indices(n)
    return tuple(tuple(lin.matrix[i][j] for j in idx) for i in idx)

"""Structure-constant algebras and the identity / solver battery.

A product on a basis ``b_0 .. b_{d-1}`` is stored as sparse structure constants
``b_i * b_j = sum_k c[i][j][k] b_k``.  Vectors are plain tuples of Coeffs.
All identity checks run over basis triples, which is complete by multilinearity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Sequence

from .exactmath import (
    AffineSolutionSpace,
    Coeff,
    Matrix,
    Poly,
    _solve_sparse,
    coeff_to_json,
    rref_basis,
    simplify,
    solve_linear,
    to_scalar,
)

Vector = tuple


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class SymbolicInputError(PreconditionError):
    pass


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------


def zero_vector(dim: int) -> Vector:
    return (Fraction(0),) * dim


def unit(dim: int, i: int) -> Vector:
    v = [Fraction(0)] * dim
    v[i] = Fraction(1)
    return tuple(v)


def vadd(*vs: Sequence) -> Vector:
    return tuple(simplify(sum(xs, Fraction(0))) for xs in zip(*vs))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(simplify(a - b) for a, b in zip(u, v))


def vscale(a, v: Sequence) -> Vector:
    return tuple(simplify(a * x) for x in v)


def is_zero_vector(v: Sequence) -> bool:
    return all(x == 0 for x in v)


# ---------------------------------------------------------------------------
# basis and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Basis:
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("a basis needs at least one element")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate basis labels in {self.labels}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def vector(self, terms: dict[str, object]) -> Vector:
        v = [Fraction(0)] * self.dim
        for label, coeff in terms.items():
            v[self.index(label)] = simplify(coeff)
        return tuple(v)

    def unit(self, label: str | int) -> Vector:
        i = label if isinstance(label, int) else self.index(label)
        return unit(self.dim, i)

    def format(self, v: Sequence) -> str:
        parts = [f"({x})*{lab}" if isinstance(x, Poly) else f"{x}*{lab}" for x, lab in zip(v, self.labels) if x != 0]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Violation:
    where: tuple[str, ...]
    residual: tuple

    def to_json(self) -> dict:
        return {"where": list(self.where), "residual": [coeff_to_json(x) for x in self.residual]}


@dataclass
class Report:
    """Outcome of an identity check: passes iff there are no violations."""

    name: str
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "violations": [v.to_json() for v in self.violations],
        }


# ---------------------------------------------------------------------------
# bilinear maps, forms, linear maps
# ---------------------------------------------------------------------------


class BilinearMap:
    """Product on a basis given by sparse structure constants."""

    __slots__ = ("basis", "_table")

    def __init__(self, basis: Basis, entries: Iterable[tuple[int, int, int, object]] = ()):
        self.basis = basis
        table: dict[tuple[int, int], dict[int, Coeff]] = {}
        d = basis.dim
        for i, j, k, c in entries:
            if not (0 <= i < d and 0 <= j < d and 0 <= k < d):
                raise IndexError(f"structure constant index ({i},{j},{k}) out of range for dim {d}")
            row = table.setdefault((i, j), {})
            row[k] = row.get(k, Fraction(0)) + c
        self._table = {}
        for key, row in table.items():
            row = {k: simplify(c) for k, c in row.items() if c != 0}
            if row:
                self._table[key] = row

    @classmethod
    def from_function(cls, basis: Basis, f) -> "BilinearMap":
        """Build from ``f(i, j) -> vector`` evaluated on basis pairs."""
        d = basis.dim
        entries = []
        for i, j in iproduct(range(d), range(d)):
            for k, c in enumerate(f(i, j)):
                if c != 0:
                    entries.append((i, j, k, c))
        return cls(basis, entries)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def entries(self) -> list[tuple[int, int, int, Coeff]]:
        return [(i, j, k, c) for (i, j), row in sorted(self._table.items()) for k, c in sorted(row.items())]

    def coeff(self, i: int, j: int, k: int) -> Coeff:
        return self._table.get((i, j), {}).get(k, Fraction(0))

    def basis_product(self, i: int, j: int) -> Vector:
        v = [Fraction(0)] * self.dim
        for k, c in self._table.get((i, j), {}).items():
            v[k] = c
        return tuple(v)

    def __call__(self, x: Sequence, y: Sequence) -> Vector:
        return mul(self, x, y)

    def __add__(self, other: "BilinearMap") -> "BilinearMap":
        _same_basis(self, other)
        return BilinearMap(self.basis, self.entries() + other.entries())

    def __sub__(self, other: "BilinearMap") -> "BilinearMap":
        return self + other.scale(-1)

    def scale(self, a) -> "BilinearMap":
        return BilinearMap(self.basis, [(i, j, k, a * c) for i, j, k, c in self.entries()])

    def opposite(self) -> "BilinearMap":
        """The product (x, y) -> y x."""
        return BilinearMap(self.basis, [(j, i, k, c) for i, j, k, c in self.entries()])

    def substitute(self, mapping) -> "BilinearMap":
        out = []
        for i, j, k, c in self.entries():
            if isinstance(c, Poly):
                c = c.substitute(mapping)
            out.append((i, j, k, c))
        return BilinearMap(self.basis, out)

    def is_antisymmetric(self) -> bool:
        d = self.dim
        return all(
            self.coeff(i, j, k) + self.coeff(j, i, k) == 0 for i in range(d) for j in range(i, d) for k in range(d)
        )

    def is_symmetric(self) -> bool:
        return self == self.opposite()

    def is_scalar(self) -> bool:
        return all(not isinstance(c, Poly) for _, _, _, c in self.entries())

    def __eq__(self, other):
        if not isinstance(other, BilinearMap):
            return NotImplemented
        return self.basis == other.basis and self._table == other._table

    def __repr__(self):
        lab = self.basis.labels
        lines = [f"{lab[i]}*{lab[j]} = {self.basis.format(self.basis_product(i, j))}" for (i, j) in sorted(self._table)]
        return "BilinearMap(" + "; ".join(lines) + ")"

    def to_json(self, role: str = "product") -> dict:
        return {
            "role": role,
            "dim": self.dim,
            "basis": list(self.basis.labels),
            "product": [{"i": i, "j": j, "k": k, "coeff": coeff_to_json(c)} for i, j, k, c in self.entries()],
        }


def _same_basis(a, b):
    if a.basis != b.basis:
        raise ValueError("operands live on different bases")


def mul(p: BilinearMap, x: Sequence, y: Sequence) -> Vector:
    """Bilinear evaluation of ``x * y`` through the structure constants."""
    d = p.dim
    if len(x) != d or len(y) != d:
        raise ValueError(f"vectors must have length {d}")
    out = [Fraction(0)] * d
    for (i, j), row in p._table.items():
        xi = x[i]
        if xi == 0:
            continue
        yj = y[j]
        if yj == 0:
            continue
        s = xi * yj
        for k, c in row.items():
            out[k] = out[k] + s * c
    return tuple(simplify(v) for v in out)


@dataclass(frozen=True)
class BilinearForm:
    basis: Basis
    entries: tuple[tuple, ...]
    symmetry: str = "none"

    def __post_init__(self):
        d = self.basis.dim
        if len(self.entries) != d or any(len(r) != d for r in self.entries):
            raise ValueError("form matrix must be dim x dim")
        object.__setattr__(self, "entries", tuple(tuple(simplify(x) for x in r) for r in self.entries))
        sign = {"symmetric": 1, "skew": -1}.get(self.symmetry)
        if self.symmetry not in ("symmetric", "skew", "none"):
            raise ValueError(f"unknown symmetry {self.symmetry!r}")
        if sign is not None:
            for i in range(d):
                for j in range(d):
                    if self.entries[i][j] != sign * self.entries[j][i]:
                        raise ValueError(f"form is not {self.symmetry} at ({i},{j})")

    def __call__(self, x: Sequence, y: Sequence) -> Coeff:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            row = self.entries[i]
            for j, yj in enumerate(y):
                if yj != 0 and row[j] != 0:
                    total = total + xi * row[j] * yj
        return simplify(total)

    def matrix(self) -> Matrix:
        return Matrix.from_rows(self.entries)

    def to_json(self) -> list:
        return [[coeff_to_json(x) for x in r] for r in self.entries]


@dataclass(frozen=True)
class LinearMap:
    """Endomorphism; column j holds the image of basis vector j."""

    basis: Basis
    matrix: tuple[tuple, ...]

    def __post_init__(self):
        d = self.basis.dim
        if len(self.matrix) != d or any(len(r) != d for r in self.matrix):
            raise ValueError("linear map must be square over its basis")
        object.__setattr__(self, "matrix", tuple(tuple(simplify(x) for x in r) for r in self.matrix))

    @classmethod
    def from_images(cls, basis: Basis, images: Sequence[Sequence]) -> "LinearMap":
        return cls(basis, tuple(zip(*images)))

    @classmethod
    def zero(cls, basis: Basis) -> "LinearMap":
        return cls(basis, tuple(zero_vector(basis.dim) for _ in range(basis.dim)))

    def __call__(self, v: Sequence) -> Vector:
        return tuple(simplify(sum((a * x for a, x in zip(row, v) if a != 0 and x != 0), Fraction(0))) for row in self.matrix)

    def image(self, j: int) -> Vector:
        return tuple(row[j] for row in self.matrix)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self o other."""
        return LinearMap.from_images(self.basis, [self(other.image(j)) for j in range(self.basis.dim)])

    def __add__(self, other):
        return LinearMap(self.basis, tuple(vadd(a, b) for a, b in zip(self.matrix, other.matrix)))

    def __sub__(self, other):
        return LinearMap(self.basis, tuple(vsub(a, b) for a, b in zip(self.matrix, other.matrix)))

    def scale(self, a) -> "LinearMap":
        return LinearMap(self.basis, tuple(vscale(a, r) for r in self.matrix))

    def commutator(self, other: "LinearMap") -> "LinearMap":
        return self.compose(other) - other.compose(self)

    def flat(self) -> Vector:
        """Row-major dim^2 coordinate vector."""
        return tuple(x for row in self.matrix for x in row)

    def is_zero(self) -> bool:
        return is_zero_vector(self.flat())

    def to_json(self) -> list:
        return [[coeff_to_json(x) for x in r] for r in self.matrix]


def left_mult(p: BilinearMap, x: Sequence) -> LinearMap:
    d = p.dim
    return LinearMap.from_images(p.basis, [mul(p, x, unit(d, j)) for j in range(d)])


def ad(bracket: BilinearMap, x: Sequence) -> LinearMap:
    return left_mult(bracket, x)


# ---------------------------------------------------------------------------
# splitting and identity checks
# ---------------------------------------------------------------------------


def split_admissible(p: BilinearMap) -> tuple[BilinearMap, BilinearMap]:
    """Commutator ``xy - yx`` and half-anticommutator ``(xy + yx)/2``."""
    op = p.opposite()
    return p - op, (p + op).scale(Fraction(1, 2))


def _basis_triples(d: int):
    return iproduct(range(d), repeat=3)


def check_jacobi(bracket: BilinearMap) -> Report:
    if not bracket.is_antisymmetric():
        raise PreconditionError("bracket is not antisymmetric")
    d, lab = bracket.dim, bracket.basis.labels
    rep = Report("jacobi")
    b = lambda i, j: bracket.basis_product(i, j)
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                ei, ej, ek = unit(d, i), unit(d, j), unit(d, k)
                res = vadd(mul(bracket, ei, b(j, k)), mul(bracket, ej, b(k, i)), mul(bracket, ek, b(i, j)))
                rep.checked += 1
                if not is_zero_vector(res):
                    rep.violations.append(Violation((lab[i], lab[j], lab[k]), res))
    return rep


def check_assoc_comm(p: BilinearMap) -> Report:
    d, lab = p.dim, p.basis.labels
    rep = Report("assoc_comm")
    for i in range(d):
        for j in range(i + 1, d):
            res = vsub(p.basis_product(i, j), p.basis_product(j, i))
            rep.checked += 1
            if not is_zero_vector(res):
                rep.violations.append(Violation(("commutator", lab[i], lab[j]), res))
    for i, j, k in _basis_triples(d):
        res = vsub(mul(p, p.basis_product(i, j), unit(d, k)), mul(p, unit(d, i), p.basis_product(j, k)))
        rep.checked += 1
        if not is_zero_vector(res):
            rep.violations.append(Violation(("associator", lab[i], lab[j], lab[k]), res))
    return rep


def poisson_residual(bracket: BilinearMap, circ: BilinearMap, i: int, j: int, k: int) -> Vector:
    """``[u,v] o w + v o [u,w] - [u, v o w]`` on basis vectors u, v, w."""
    d = bracket.dim
    u, v, w = unit(d, i), unit(d, j), unit(d, k)
    lhs = mul(bracket, u, circ.basis_product(j, k))
    rhs = vadd(mul(circ, bracket.basis_product(i, j), w), mul(circ, v, bracket.basis_product(i, k)))
    return vsub(rhs, lhs)


def check_poisson(bracket: BilinearMap, circ: BilinearMap) -> Report:
    _same_basis(bracket, circ)
    if not check_jacobi(bracket).passed:
        raise PreconditionError("bracket fails the Jacobi identity")
    if not check_assoc_comm(circ).passed:
        raise PreconditionError("product is not commutative and associative")
    d, lab = bracket.dim, bracket.basis.labels
    rep = Report("poisson")
    for i, j, k in _basis_triples(d):
        res = poisson_residual(bracket, circ, i, j, k)
        rep.checked += 1
        if not is_zero_vector(res):
            rep.violations.append(Violation((lab[i], lab[j], lab[k]), res))
    return rep


def check_symmetric_leibniz(p: BilinearMap) -> Report:
    """Left and right multiplications are derivations."""
    d, lab = p.dim, p.basis.labels
    rep = Report("symmetric_leibniz")
    for i, j, k in _basis_triples(d):
        u, v, w = unit(d, i), unit(d, j), unit(d, k)
        uv, vw, uw = p.basis_product(i, j), p.basis_product(j, k), p.basis_product(i, k)
        # u(vw) = (uv)w + v(uw)
        left = vsub(mul(p, u, vw), vadd(mul(p, uv, w), mul(p, v, uw)))
        # (vw)u = (vu)w + v(wu)
        right = vsub(mul(p, vw, u), vadd(mul(p, p.basis_product(j, i), w), mul(p, v, p.basis_product(k, i))))
        rep.checked += 2
        if not is_zero_vector(left):
            rep.violations.append(Violation(("left", lab[i], lab[j], lab[k]), left))
        if not is_zero_vector(right):
            rep.violations.append(Violation(("right", lab[i], lab[j], lab[k]), right))
    return rep


def check_form_invariance(form: BilinearForm, p: BilinearMap, mode: str = "bracket") -> Report:
    """bracket mode: B([u,v],w) + B(v,[u,w]) = 0.  product mode: B(uv,w) = B(u,vw)."""
    if form.basis != p.basis:
        raise ValueError("form and product live on different bases")
    d, lab = p.dim, p.basis.labels
    rep = Report(f"form_invariance[{mode}]")
    for i, j, k in _basis_triples(d):
        u, v, w = unit(d, i), unit(d, j), unit(d, k)
        if mode == "bracket":
            res = simplify(form(p.basis_product(i, j), w) + form(v, p.basis_product(i, k)))
        elif mode == "product":
            res = simplify(form(p.basis_product(i, j), w) - form(u, p.basis_product(j, k)))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        rep.checked += 1
        if res != 0:
            rep.violations.append(Violation((lab[i], lab[j], lab[k]), (res,)))
    return rep


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def _require_scalar(p: BilinearMap):
    if not p.is_scalar():
        raise SymbolicInputError("solver requires rational structure constants")


def symmetric_coords(d: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(d) for j in range(i, d)]


def form_from_symmetric_coords(basis: Basis, vec: Sequence) -> BilinearForm:
    d = basis.dim
    m = [[Fraction(0)] * d for _ in range(d)]
    for (i, j), x in zip(symmetric_coords(d), vec):
        m[i][j] = m[j][i] = x
    return BilinearForm(basis, tuple(map(tuple, m)), "symmetric")


def symmetric_coords_of(form: BilinearForm) -> Vector:
    return tuple(form.entries[i][j] for i, j in symmetric_coords(form.basis.dim))


def invariant_symmetric_forms(bracket: BilinearMap) -> AffineSolutionSpace:
    """Space of all symmetric B with B([u,v],w) + B(v,[u,w]) = 0.

    Coordinates are the upper-triangle entries (i <= j) in row-major order.
    This is the space of all invariant symmetric forms, degenerate ones included.
    """
    _require_scalar(bracket)
    d = bracket.dim
    coords = symmetric_coords(d)
    pos = {ij: n for n, ij in enumerate(coords)}
    key = lambda a, b: pos[(a, b) if a <= b else (b, a)]
    rows = []
    for i, j, k in _basis_triples(d):
        row: dict[int, Fraction] = {}
        for m, c in enumerate(bracket.basis_product(i, j)):
            if c:
                row[key(m, k)] = row.get(key(m, k), 0) + c
        for m, c in enumerate(bracket.basis_product(i, k)):
            if c:
                row[key(j, m)] = row.get(key(j, m), 0) + c
        row = {a: to_scalar(b) for a, b in row.items() if b}
        if row:
            rows.append(row)
    return _solve_sparse(rows, [Fraction(0)] * len(rows), len(coords))


def derivations(bracket: BilinearMap, kernel_constraints: Sequence[Sequence] = ()) -> AffineSolutionSpace:
    """Linear maps J with J[x,y] = [Jx,y] + [x,Jy] and J(v) = 0 for each constraint v.

    Coordinates are the matrix entries J[i][j] (image of b_j along b_i), row-major.
    """
    _require_scalar(bracket)
    d = bracket.dim
    var = lambda i, j: i * d + j
    rows = []
    for a in range(d):
        for b in range(d):
            ab = bracket.basis_product(a, b)
            # component m of J[b_a,b_b] - [J b_a, b_b] - [b_a, J b_b]
            for m in range(d):
                row: dict[int, Fraction] = {}
                for k, c in enumerate(ab):
                    if c:
                        row[var(m, k)] = row.get(var(m, k), 0) + c
                for k in range(d):
                    c1 = bracket.coeff(k, b, m)
                    if c1:
                        row[var(k, a)] = row.get(var(k, a), 0) - c1
                    c2 = bracket.coeff(a, k, m)
                    if c2:
                        row[var(k, b)] = row.get(var(k, b), 0) - c2
                row = {x: to_scalar(y) for x, y in row.items() if y}
                if row:
                    rows.append(row)
    for v in kernel_constraints:
        for m in range(d):
            row = {var(m, j): to_scalar(x) for j, x in enumerate(v) if x != 0}
            if row:
                rows.append(row)
    return _solve_sparse(rows, [Fraction(0)] * len(rows), d * d)


def linear_map_from_coords(basis: Basis, vec: Sequence) -> LinearMap:
    d = basis.dim
    return LinearMap(basis, tuple(tuple(vec[i * d: (i + 1) * d]) for i in range(d)))


def center(bracket: BilinearMap) -> tuple[Vector, ...]:
    """RREF basis of {x : [x, y] = 0 for all y}."""
    _require_scalar(bracket)
    return _two_sided_kernel(bracket, both=False)


def annihilator(p: BilinearMap) -> tuple[Vector, ...]:
    """RREF basis of {x : x y = y x = 0 for all y}."""
    _require_scalar(p)
    return _two_sided_kernel(p, both=True)


def _two_sided_kernel(p: BilinearMap, both: bool) -> tuple[Vector, ...]:
    d = p.dim
    rows = []
    for j in range(d):
        for k in range(d):
            rows.append({i: to_scalar(p.coeff(i, j, k)) for i in range(d) if p.coeff(i, j, k) != 0})
            if both:
                rows.append({i: to_scalar(p.coeff(j, i, k)) for i in range(d) if p.coeff(j, i, k) != 0})
    rows = [r for r in rows if r]
    return _solve_sparse(rows, [Fraction(0)] * len(rows), d).nullspace_basis


def signature(form: BilinearForm) -> tuple[int, int, int]:
    """Inertia (positives, negatives, zeros) by exact congruence diagonalization."""
    d = form.basis.dim
    m = [[to_scalar(x) for x in row] for row in form.entries]
    if any(m[i][j] != m[j][i] for i in range(d) for j in range(d)):
        raise PreconditionError("signature needs a symmetric form")
    pos = neg = 0
    active = list(range(d))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace b_i by b_i + b_j: diagonal becomes 2 m[i][j]
            for k in range(d):
                m[i][k] += m[j][k]
            for k in range(d):
                m[k][i] += m[k][j]
            piv = i
        p = m[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for r in active:
            f = m[r][piv] / p
            if f:
                for k in range(d):
                    m[r][k] -= f * m[piv][k]
                for k in range(d):
                    m[k][r] -= f * m[k][piv]
    return pos, neg, d - pos - neg


def transport(p: BilinearMap, change: Matrix) -> BilinearMap:
    """Structure constants of ``p`` in the basis given by the columns of ``change``."""
    d = p.dim
    cols = [tuple(change[i, j] for i in range(d)) for j in range(d)]
    inv_cols = _inverse_columns(change)
    def f(i, j):
        prod = mul(p, cols[i], cols[j])
        return tuple(
            simplify(sum((inv_cols[m][r] * prod[m] for m in range(d) if prod[m] != 0), Fraction(0))) for r in range(d)
        )
    return BilinearMap.from_function(p.basis, f)


def _inverse_columns(change: Matrix) -> list[Vector]:
    """inv_cols[m] = coordinates of old basis vector b_m in the new basis."""
    d = change.rows
    rows = []
    for m in range(d):
        target = unit(d, m)
        sol = solve_linear(change, target)
        if sol.dim:
            raise ValueError("change of basis is singular")
        rows.append(sol.particular)
    return rows

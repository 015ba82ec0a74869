"""Bi-invariant connections on the oscillator group.

The exact layer works with connections at the identity, ``∇_u v`` for
left-invariant fields, as bilinear maps over Coeffs.  The float layer checks the
coordinate expressions (group law, left-invariant frame, metric, Christoffel
symbols) in the chart ``(t, s, x1, y1, ..., xn, yn)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import (
    Basis,
    BilinearForm,
    BilinearMap,
    LinearMap,
    PreconditionError,
    is_zero_vector,
    left_mult,
    mul,
    unit,
    vsub,
)
from .exactmath import Poly, rref_basis, simplify, to_scalar
from .oscillator import Lambda, _lam, build_oscillator, oscillator_basis, poisson_product

# ---------------------------------------------------------------------------
# exact layer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConnectionAlg:
    """∇_{b_i} b_j = coeffs(b_i, b_j) on left-invariant fields."""

    coeffs: BilinearMap

    @property
    def basis(self) -> Basis:
        return self.coeffs.basis

    def __call__(self, u: Sequence, v: Sequence):
        return mul(self.coeffs, u, v)

    def operator(self, u: Sequence) -> LinearMap:
        return left_mult(self.coeffs, u)


def nabla0(lam) -> ConnectionAlg:
    """∇⁰_u v = ½[u, v]."""
    return ConnectionAlg(build_oscillator(lam).scale(Fraction(1, 2)))


def nabla(lam, c="c") -> ConnectionAlg:
    """∇_u v = ½[u, v] + u∘v with the one-parameter Poisson product."""
    return ConnectionAlg(nabla0(lam).coeffs + poisson_product(lam, c))


def half_bracket_connection(bracket: BilinearMap) -> ConnectionAlg:
    return ConnectionAlg(bracket.scale(Fraction(1, 2)))


def torsion(conn: ConnectionAlg, bracket: BilinearMap) -> dict[tuple[int, int], tuple]:
    """Nonzero T(b_i, b_j) = ∇_i b_j − ∇_j b_i − [b_i, b_j]; empty when torsion-free."""
    d = bracket.dim
    out = {}
    for i in range(d):
        for j in range(i + 1, d):
            t = vsub(vsub(conn.coeffs.basis_product(i, j), conn.coeffs.basis_product(j, i)), bracket.basis_product(i, j))
            if not is_zero_vector(t):
                out[(i, j)] = t
    return out


@dataclass(frozen=True)
class CurvatureTensor:
    basis: Basis
    ops: dict  # (i, j) with i < j -> LinearMap R(b_i, b_j)

    def R(self, i: int, j: int) -> LinearMap:
        if i == j:
            return LinearMap.zero(self.basis)
        if i < j:
            return self.ops[(i, j)]
        return self.ops[(j, i)].scale(-1)

    def apply(self, u: Sequence, v: Sequence, w: Sequence) -> tuple:
        d = self.basis.dim
        out = [Fraction(0)] * d
        for i in range(d):
            for j in range(i + 1, d):
                coef = u[i] * v[j] - u[j] * v[i]
                if coef != 0:
                    img = self.ops[(i, j)](w)
                    out = [a + coef * b for a, b in zip(out, img)]
        return tuple(simplify(x) for x in out)

    def __eq__(self, other):
        if not isinstance(other, CurvatureTensor):
            return NotImplemented
        return self.basis == other.basis and all(
            self.ops[k].matrix == other.ops[k].matrix for k in self.ops
        )

    def is_zero(self) -> bool:
        return all(op.is_zero() for op in self.ops.values())


def curvature(conn: ConnectionAlg, bracket: BilinearMap) -> CurvatureTensor:
    """R(u,v) = [∇_u, ∇_v] − ∇_{[u,v]} on left-invariant fields."""
    d = bracket.dim
    nab = [conn.operator(unit(d, i)) for i in range(d)]
    ops = {}
    for i in range(d):
        for j in range(i + 1, d):
            ops[(i, j)] = nab[i].commutator(nab[j]) - conn.operator(bracket.basis_product(i, j))
    return CurvatureTensor(bracket.basis, ops)


def covariant_derivative_R(conn: ConnectionAlg, R: CurvatureTensor) -> dict[tuple[int, int, int, int], tuple]:
    """Nonzero components (∇_x R)(u, v) w over basis quadruples (x; u < v; w)."""
    d = R.basis.dim
    nab = [conn.operator(unit(d, i)) for i in range(d)]
    out = {}
    for x in range(d):
        for u in range(d):
            for v in range(u + 1, d):
                Ruv = R.R(u, v)
                # ∇_x R(u,v) − R(∇_x u, v) − R(u, ∇_x v) − R(u,v)∇_x, as an operator
                op = nab[x].compose(Ruv) - Ruv.compose(nab[x])
                op = op - _R_of(R, nab[x].image(u), unit(d, v)) - _R_of(R, unit(d, u), nab[x].image(v))
                for w in range(d):
                    val = op.image(w)
                    if not is_zero_vector(val):
                        out[(x, u, v, w)] = val
    return out


def _R_of(R: CurvatureTensor, a: Sequence, b: Sequence) -> LinearMap:
    d = R.basis.dim
    total = LinearMap.zero(R.basis)
    for i in range(d):
        if a[i] == 0:
            continue
        for j in range(d):
            if b[j] != 0 and i != j:
                total = total + R.R(i, j).scale(a[i] * b[j])
    return total


def is_locally_symmetric(conn: ConnectionAlg, bracket: BilinearMap) -> bool:
    return not covariant_derivative_R(conn, curvature(conn, bracket))


def _span_closure(generators: list[tuple], dim: int, order=None) -> tuple[tuple, ...]:
    """Smallest subspace of dim x dim matrices containing the generators and
    closed under commutators; canonical RREF basis of flattened matrices."""
    basis = rref_basis(generators, dim * dim)
    while True:
        mats = [np.array(v, dtype=object).reshape(dim, dim) for v in basis]
        pairs = [(a, b) for a in range(len(mats)) for b in range(a + 1, len(mats))]
        if order is not None:
            order.shuffle(pairs)
        new = [tuple((mats[a].dot(mats[b]) - mats[b].dot(mats[a])).reshape(-1)) for a, b in pairs]
        grown = rref_basis(list(basis) + new, dim * dim)
        if len(grown) == len(basis):
            return grown
        basis = grown


def holonomy_span(conn: ConnectionAlg, R: CurvatureTensor, bracket: BilinearMap | None = None) -> tuple[tuple, ...]:
    """Infinitesimal holonomy: span of curvature operators closed under commutator.

    Only valid when ∇R = 0, which is checked.
    """
    if covariant_derivative_R(conn, R):
        raise PreconditionError("holonomy span is only computed for locally symmetric connections")
    d = R.basis.dim
    gens = []
    for op in R.ops.values():
        flat = op.flat()
        if any(isinstance(x, Poly) for x in flat):
            raise PreconditionError("curvature has symbolic entries; substitute parameters first")
        gens.append(tuple(to_scalar(x) for x in flat))
    return _span_closure(gens, d)


def metric_compat_residual(conn: ConnectionAlg, form: BilinearForm) -> list[list[list]]:
    """T[x][u][v] = −form(∇_x u, v) − form(u, ∇_x v); zero iff ∇ preserves the form."""
    d = form.basis.dim
    out = []
    for x in range(d):
        plane = []
        for u in range(d):
            row = []
            for v in range(d):
                val = -form(conn.coeffs.basis_product(x, u), unit(d, v)) - form(unit(d, u), conn.coeffs.basis_product(x, v))
                row.append(simplify(val))
            plane.append(row)
        out.append(plane)
    return out


# ---------------------------------------------------------------------------
# float layer: coordinates on G_λ
# ---------------------------------------------------------------------------


def _lam_floats(lam) -> np.ndarray:
    if isinstance(lam, (Lambda, str)):
        lam = _lam(lam).values
    return np.array([float(v) for v in lam], dtype=float)


@dataclass(frozen=True)
class GroupPoint:
    t: float
    s: float
    z: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(complex(v) for v in self.z))
        if not all(np.isfinite([self.t, self.s])) or not all(np.isfinite(v) for v in self.z):
            raise ValueError("group coordinates must be finite")

    @classmethod
    def from_coords(cls, x: Sequence[float]) -> "GroupPoint":
        x = list(x)
        return cls(x[0], x[1], tuple(complex(x[2 + 2 * j], x[3 + 2 * j]) for j in range((len(x) - 2) // 2)))

    def coords(self) -> np.ndarray:
        out = [self.t, self.s]
        for v in self.z:
            out += [v.real, v.imag]
        return np.array(out, dtype=float)


def identity_point(n: int) -> GroupPoint:
    return GroupPoint(0.0, 0.0, (0j,) * n)


def group_mul(lam, p: GroupPoint, q: GroupPoint) -> GroupPoint:
    lv = _lam_floats(lam)
    rot = np.exp(1j * p.t * lv)
    zp, zq = np.array(p.z), np.array(q.z)
    s = p.s + q.s + 0.5 * float(np.sum(np.imag(np.conj(zp) * rot * zq)))
    return GroupPoint(p.t + q.t, s, tuple(zp + rot * zq))


def frame_at(lam, p: GroupPoint) -> np.ndarray:
    """Column b holds the chart components of the left-invariant field of basis vector b."""
    lv = _lam_floats(lam)
    n = len(lv)
    F = np.zeros((2 * n + 2, 2 * n + 2))
    F[0, 0] = 1.0
    F[1, 1] = 1.0
    for j in range(n):
        x, y = p.z[j].real, p.z[j].imag
        c, s = np.cos(p.t * lv[j]), np.sin(p.t * lv[j])
        ix, iy = 2 + 2 * j, 3 + 2 * j
        F[1, ix] = 0.5 * (x * s - y * c)
        F[ix, ix] = c
        F[iy, ix] = s
        F[1, iy] = 0.5 * (x * c + y * s)
        F[ix, iy] = -s
        F[iy, iy] = c
    return F


def inverse_frame_at(lam, p: GroupPoint) -> np.ndarray:
    """Column a holds the coordinate field ∂_a in the left-invariant frame."""
    lv = _lam_floats(lam)
    n = len(lv)
    G = np.zeros((2 * n + 2, 2 * n + 2))
    G[0, 0] = 1.0
    G[1, 1] = 1.0
    for j in range(n):
        x, y = p.z[j].real, p.z[j].imag
        c, s = np.cos(p.t * lv[j]), np.sin(p.t * lv[j])
        ix, iy = 2 + 2 * j, 3 + 2 * j
        G[1, ix] = 0.5 * y
        G[ix, ix] = c
        G[iy, ix] = -s
        G[1, iy] = -0.5 * x
        G[ix, iy] = s
        G[iy, iy] = c
    return G


def fd_frame_at(lam, p: GroupPoint, step: float = 1e-6) -> np.ndarray:
    """Frame from central differences of μ ↦ p·(μ u) at μ = 0."""
    n = len(p.z)
    dim = 2 * n + 2
    F = np.zeros((dim, dim))
    for b in range(dim):
        u = np.zeros(dim)
        u[b] = step
        plus = group_mul(lam, p, GroupPoint.from_coords(u)).coords()
        minus = group_mul(lam, p, GroupPoint.from_coords(-u)).coords()
        F[:, b] = (plus - minus) / (2 * step)
    return F


def k_matrix(lam) -> np.ndarray:
    lv = _lam_floats(lam)
    n = len(lv)
    K = np.zeros((2 * n + 2, 2 * n + 2))
    K[0, 1] = K[1, 0] = 1.0
    for j in range(n):
        K[2 + 2 * j, 2 + 2 * j] = K[3 + 2 * j, 3 + 2 * j] = 1.0 / lv[j]
    return K


def metric_at(lam, p: GroupPoint) -> np.ndarray:
    """h = 2 dt ds + Σ (y_i dx_i − x_i dy_i) dt + Σ (dx_i² + dy_i²)/λ_i as a symmetric matrix."""
    lv = _lam_floats(lam)
    n = len(lv)
    H = np.zeros((2 * n + 2, 2 * n + 2))
    H[0, 1] = H[1, 0] = 1.0
    for j in range(n):
        x, y = p.z[j].real, p.z[j].imag
        ix, iy = 2 + 2 * j, 3 + 2 * j
        H[0, ix] = H[ix, 0] = 0.5 * y
        H[0, iy] = H[iy, 0] = -0.5 * x
        H[ix, ix] = H[iy, iy] = 1.0 / lv[j]
    return H


def pullback_metric_at(lam, p: GroupPoint) -> np.ndarray:
    G = inverse_frame_at(lam, p)
    return G.T @ k_matrix(lam) @ G


def connection_array(conn: ConnectionAlg, assignment: dict | None = None) -> np.ndarray:
    """Float array N[A, B, C] with ∇_{E_A} E_B = Σ_C N[A,B,C] E_C."""
    d = conn.basis.dim
    N = np.zeros((d, d, d))
    for i, j, k, c in conn.coeffs.entries():
        if isinstance(c, Poly):
            c = c.evaluate(assignment or {})
        N[i, j, k] = float(c)
    return N


def christoffels_at(lam, c, p: GroupPoint, step: float = 1e-6) -> np.ndarray:
    """Γ[a, b, k]: chart components of ∇_{∂_a} ∂_b for ∇ = ∇⁰ + (Poisson product with constant c).

    ∂_b = Σ_B G[B, b] E_B; the derivative of the coefficients G uses central
    differences along the chart, the rest is the algebraic connection.
    """
    lam = _lam(lam)
    conn = nabla(lam, Fraction(c))
    N = connection_array(conn)
    x0 = p.coords()
    dim = len(x0)
    G = inverse_frame_at(lam, p)
    F = frame_at(lam, p)
    dG = np.zeros((dim, dim, dim))  # dG[a] = ∂_a G
    for a in range(dim):
        h = np.zeros(dim)
        h[a] = step
        dG[a] = (inverse_frame_at(lam, GroupPoint.from_coords(x0 + h)) - inverse_frame_at(lam, GroupPoint.from_coords(x0 - h))) / (2 * step)
    Gamma = np.zeros((dim, dim, dim))
    for a in range(dim):
        for b in range(dim):
            frame_coeffs = dG[a][:, b] + np.einsum("A,B,ABC->C", G[:, a], G[:, b], N)
            Gamma[a, b] = F @ frame_coeffs
    return Gamma


def christoffels_closed_form(lam, c: float, p: GroupPoint) -> np.ndarray:
    """Γ from the closed coordinate formulas, plus ∇_{∂t}∂t = c ∂s."""
    lv = _lam_floats(lam)
    n = len(lv)
    dim = 2 * n + 2
    Gamma = np.zeros((dim, dim, dim))
    Gamma[0, 0, 1] = float(c)
    for j in range(n):
        x, y = p.z[j].real, p.z[j].imag
        ix, iy = 2 + 2 * j, 3 + 2 * j
        vx = np.zeros(dim)
        vx[1] = 0.5 * x
        vx[iy] = 1.0
        vx *= -lv[j] / 2
        vy = np.zeros(dim)
        vy[1] = 0.5 * y
        vy[ix] = -1.0
        vy *= -lv[j] / 2
        Gamma[0, ix] = Gamma[ix, 0] = vx
        Gamma[0, iy] = Gamma[iy, 0] = vy
    return Gamma


def random_point(rng: np.random.Generator, n: int, scale: float = 2.0) -> GroupPoint:
    x = rng.uniform(-scale, scale, size=2 * n + 2)
    return GroupPoint.from_coords(x)

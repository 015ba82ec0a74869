"""Computational classification of Poisson products on a given Lie algebra.

An unknown symmetric product ``b_i o b_j = sum_k u[i][j][k] b_k`` is written with
one fresh variable per (i <= j, k).  The compatibility identity with the bracket
is linear in the unknowns and is solved exactly; associativity is quadratic and is
only evaluated (symbolically on candidate families, pointwise on random samples).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    BilinearForm,
    BilinearMap,
    PreconditionError,
    check_form_invariance,
    check_jacobi,
    form_from_symmetric_coords,
    is_zero_vector,
    mul,
    poisson_residual,
    rref_basis,
    symmetric_coords,
    unit,
)
from .exactmath import (
    AffineSolutionSpace,
    Coeff,
    Matrix,
    Poly,
    _solve_sparse,
    as_poly,
    simplify,
    to_scalar,
)
from .oscillator import (
    E_0,
    E_M1,
    Lambda,
    build_k_lambda,
    build_omega,
    build_oscillator,
    e_minus1_square_form,
    is_generic,
    s_indices,
)


def unknown_name(i: int, j: int, k: int) -> str:
    i, j = min(i, j), max(i, j)
    return f"u_{i}_{j}_{k}"


@dataclass(frozen=True)
class UnknownProduct:
    """Symmetric product whose structure constants are fresh variables."""

    product: BilinearMap
    names: tuple[str, ...]

    @classmethod
    def on(cls, basis) -> "UnknownProduct":
        d = basis.dim
        names = tuple(unknown_name(i, j, k) for i, j in symmetric_coords(d) for k in range(d))
        entries = [(i, j, k, Poly.var(unknown_name(i, j, k))) for i in range(d) for j in range(d) for k in range(d)]
        return cls(BilinearMap(basis, entries), names)


@dataclass
class ConstraintSystem:
    unknowns: tuple[str, ...]
    linear: Matrix
    rhs: tuple[Fraction, ...]
    quadratic: list[Poly]
    n_triples: int
    _sparse_rows: list = field(default_factory=list, repr=False)


def generate_constraints(bracket: BilinearMap) -> ConstraintSystem:
    """Linear block: every basis-triple instance of the Poisson identity.
    Quadratic block: every basis-triple associator of the unknown product."""
    if not bracket.is_scalar():
        raise PreconditionError("bracket must have rational structure constants")
    if not check_jacobi(bracket).passed:
        raise PreconditionError("bracket fails the Jacobi identity")
    d = bracket.dim
    unk = UnknownProduct.on(bracket.basis)
    col = {name: n for n, name in enumerate(unk.names)}
    circ = unk.product
    sparse_rows = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                res = poisson_residual(bracket, circ, i, j, k)
                for comp in res:
                    lin, const = as_poly(comp).linear_part()
                    sparse_rows.append({col[v]: c for v, c in lin.items()})
    ncols = len(unk.names)
    dense = Matrix(tuple(tuple(row.get(c, Fraction(0)) for c in range(ncols)) for row in sparse_rows))
    quadratic = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                left = mul(circ, circ.basis_product(i, j), unit(d, k))
                right = mul(circ, unit(d, i), circ.basis_product(j, k))
                quadratic.extend(as_poly(a) - as_poly(b) for a, b in zip(left, right))
    return ConstraintSystem(
        unk.names, dense, tuple(Fraction(0) for _ in sparse_rows), quadratic, d ** 3, sparse_rows
    )


def solve_linear_stage(cs: ConstraintSystem) -> AffineSolutionSpace:
    rows = cs._sparse_rows or cs.linear.sparse_rows()
    nonzero = [(r, b) for r, b in zip(rows, cs.rhs) if r or b]
    return _solve_sparse([r for r, _ in nonzero], [b for _, b in nonzero], len(cs.unknowns))


def substitution(cs: ConstraintSystem, space: AffineSolutionSpace) -> dict[str, Coeff]:
    return dict(zip(cs.unknowns, space.parametrized()))


def quadratic_residuals(cs: ConstraintSystem, space: AffineSolutionSpace) -> list[Coeff]:
    """Associativity constraints pulled back to the free parameters t1..tk."""
    sub = substitution(cs, space)
    return [simplify(q.substitute(sub)) for q in cs.quadratic]


def product_from_coords(basis, names: Sequence[str], values: Sequence) -> BilinearMap:
    """Materialize a point of the unknown-coordinate space as a symmetric product."""
    val = dict(zip(names, values))
    d = basis.dim
    return BilinearMap(
        basis, [(i, j, k, val[unknown_name(i, j, k)]) for i in range(d) for j in range(d) for k in range(d)]
    )


def coords_of_product(p: BilinearMap, names: Sequence[str]) -> tuple:
    out = []
    for name in names:
        _, i, j, k = name.split("_")
        out.append(p.coeff(int(i), int(j), int(k)))
    return tuple(out)


def theorem_family(lam: Lambda, names: Sequence[str]) -> tuple:
    """Unknown coordinates of the one-parameter family e_{-1} o e_{-1} = c e_0."""
    c = Poly.var("c")
    return tuple(c if n == unknown_name(E_M1, E_M1, E_0) else Fraction(0) for n in names)


def random_rational(rng: random.Random, num_range=(-9, 9), den_range=(1, 9)) -> Fraction:
    return Fraction(rng.randint(*num_range), rng.randint(*den_range))


# ---------------------------------------------------------------------------
# checkpoints mirroring the linear stage of the hand derivation
# ---------------------------------------------------------------------------


def _checkpoints(lam: Lambda, names, point) -> dict[str, bool]:
    """Linear consequences of the Poisson identity, evaluated on one point."""
    n, d = lam.n, lam.dim
    bracket = build_oscillator(lam)
    p = product_from_coords(bracket.basis, names, point)
    S = s_indices(n)
    # a_{-1}(u, v) = e_{-1}-component of u o v
    a_m1 = form_from_symmetric_coords(
        bracket.basis, [p.coeff(i, j, E_M1) for i, j in symmetric_coords(d)]
    )
    a_0 = lambda i, j: p.coeff(i, j, E_0)
    k_vec = [build_k_lambda(lam).entries[i][j] for i, j in symmetric_coords(d)]
    q_vec = [e_minus1_square_form(n).entries[i][j] for i, j in symmetric_coords(d)]
    a_vec = [a_m1.entries[i][j] for i, j in symmetric_coords(d)]
    out = {}
    out["a_minus1_invariant"] = check_form_invariance(a_m1, bracket, "bracket").passed
    out["a_minus1_in_span_k_and_e_minus1_sq"] = len(rref_basis([k_vec, q_vec, a_vec], len(k_vec))) == 2
    out["center_stable"] = all(p.coeff(E_0, E_0, k) == 0 for k in range(d) if k != E_0)
    out["e0_products_vanish"] = all(is_zero_vector(p.basis_product(E_0, i)) for i in [E_0] + S)
    out["S_products_central"] = all(
        p.coeff(i, j, k) == 0 for i in S for j in S for k in range(d) if k != E_0
    )
    q = p.coeff(E_M1, E_M1, E_M1)
    out["e_minus1_on_S_is_scalar"] = all(
        p.basis_product(E_M1, i) == tuple(Fraction(q, 2) if k == i else Fraction(0) for k in range(d)) for i in S
    )
    out["e_minus1_square_has_no_S_part"] = all(p.coeff(E_M1, E_M1, k) == 0 for k in S)
    # DA = (a_0(e_{-1}, e_0) − ½ a_{-1}(e_{-1}, e_{-1})) Id_S with a_0(u, v) = ω(Au, v)
    omega = build_omega(n)
    W = [[omega.entries[i][j] for j in S] for i in S]
    A0 = [[to_scalar(a_0(i, j)) for j in S] for i in S]
    # ω(Au, v) = (Aᵀ W)[u][v]  =>  A = −W⁻¹ A0 (W skew, W⁻¹ = −W for the standard form)
    Winv = [[-x for x in row] for row in W]
    A = [[-sum(Winv[r][m] * A0[m][cidx] for m in range(len(S))) for cidx in range(len(S))] for r in range(len(S))]
    Dm = [[bracket.coeff(E_M1, j, i) for j in S] for i in S]
    DA = [[sum(Dm[r][m] * A[m][cidx] for m in range(len(S))) for cidx in range(len(S))] for r in range(len(S))]
    scal = to_scalar(a_0(E_M1, E_0)) - Fraction(1, 2) * to_scalar(q)
    out["DA_is_scalar"] = all(DA[r][cidx] == (scal if r == cidx else 0) for r in range(len(S)) for cidx in range(len(S)))
    return out


@dataclass
class ClassifyReport:
    linear_dim: int
    family_contained: bool | None
    samples_total: int
    samples_excluded: int
    samples_skipped_in_family: int
    checkpoints: dict[str, bool]
    n_triples: int
    n_linear_rows: int
    linear_rank: int
    completeness_asserted: bool
    nonzero_residuals: int

    @property
    def all_excluded(self) -> bool:
        return self.samples_excluded == self.samples_total

    def to_json(self) -> dict:
        return {
            "linear_dim": self.linear_dim,
            "family_contained": self.family_contained,
            "samples": {
                "total": self.samples_total,
                "excluded": self.samples_excluded,
                "skipped_in_family": self.samples_skipped_in_family,
            },
            "checkpoints": [{"name": k, "passed": v} for k, v in self.checkpoints.items()],
            "constraints": {
                "triples": self.n_triples,
                "linear_rows": self.n_linear_rows,
                "linear_rank": self.linear_rank,
                "nonzero_quadratic_residuals": self.nonzero_residuals,
            },
            "completeness_asserted": self.completeness_asserted,
        }


def family_containment(cs: ConstraintSystem, family: Sequence) -> bool:
    """Family (polynomial coordinates) solves the linear block and annihilates the
    quadratic block identically in its parameters."""
    for row in cs._sparse_rows or cs.linear.sparse_rows():
        if simplify(sum((c * as_poly(family[j]) for j, c in row.items()), Poly())) != 0:
            return False
    sub = dict(zip(cs.unknowns, family))
    return all(q.substitute(sub) == 0 for q in cs.quadratic)


def classify_report(
    bracket: BilinearMap,
    lam: Lambda | None = None,
    seed: int = 42,
    samples: int = 100,
    num_range=(-9, 9),
    den_range=(1, 9),
    checkpoint_points: int = 5,
) -> ClassifyReport:
    """Linear solve, family containment, and seeded exclusion sampling.

    ``lam`` marks the bracket as the oscillator algebra for that lambda, which
    enables the family-containment test and the derivation checkpoints.
    """
    cs = generate_constraints(bracket)
    space = solve_linear_stage(cs)
    residuals = [r for r in quadratic_residuals(cs, space) if r != 0]
    rank = len(cs.unknowns) - space.dim
    rng = random.Random(seed)

    family_contained = None
    in_family = lambda x: False
    if lam is not None:
        family = theorem_family(lam, cs.unknowns)
        family_contained = family_containment(cs, family)
        c_col = cs.unknowns.index(unknown_name(E_M1, E_M1, E_0))
        in_family = lambda x: all(v == 0 for j, v in enumerate(x) if j != c_col)

    excluded = skipped = 0
    rows = cs._sparse_rows
    drawn = 0
    while drawn < samples:
        t = [random_rational(rng, num_range, den_range) for _ in range(space.dim)]
        x = space.point(t)
        if lam is not None and in_family(x):
            skipped += 1
            if skipped > 100 * samples:
                break
            continue
        drawn += 1
        member = all(sum((c * x[j] for j, c in row.items()), Fraction(0)) == 0 for row in rows)
        assign = dict(zip(space.free_param_names, t))
        vanishes = all(as_poly(r).evaluate(assign) == 0 for r in residuals)
        if not (member and vanishes):
            excluded += 1

    checkpoints = {}
    if lam is not None:
        for _ in range(checkpoint_points):
            t = [random_rational(rng, num_range, den_range) for _ in range(space.dim)]
            for name, ok in _checkpoints(lam, cs.unknowns, space.point(t)).items():
                checkpoints[name] = checkpoints.get(name, True) and ok

    return ClassifyReport(
        linear_dim=space.dim,
        family_contained=family_contained,
        samples_total=drawn,
        samples_excluded=excluded,
        samples_skipped_in_family=skipped,
        checkpoints=checkpoints,
        n_triples=cs.n_triples,
        n_linear_rows=cs.linear.rows,
        linear_rank=rank,
        completeness_asserted=bool(lam is not None and is_generic(lam)),
        nonzero_residuals=len(residuals),
    )


def classify_oscillator(lam, **kwargs) -> ClassifyReport:
    lam = lam if isinstance(lam, Lambda) else Lambda.parse(lam) if isinstance(lam, str) else Lambda(tuple(lam))
    return classify_report(build_oscillator(lam), lam=lam, **kwargs)

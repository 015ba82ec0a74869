"""Coproducts, the double Phi(A), and the Leibniz/Lie bialgebra conditions.

Conventions (pinned by the tests):

* a 2-tensor ``t`` is a d x d matrix with ``t = sum t[j][k] b_j ⊗ b_k``; it is
  read as a bilinear form on g* by ``t(b_j^*, b_k^*) = t[j][k]``;
* ``u ∧ v = u⊗v - v⊗u`` and ``u ⊙ v = u⊗v + v⊗u``;
* an endomorphism J acts on tensors by ``J(u⊗v) = Ju⊗v + u⊗Jv``;
* ``r_#`` is defined by ``β(r_#(α)) = r(α, β)``, so ``r_#(b_j^*) = sum_k r[j][k] b_k``;
* the dual product of a coproduct is ``(α∘β)(x) = Δ(x)(α, β)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Basis,
    BilinearForm,
    BilinearMap,
    LinearMap,
    PreconditionError,
    Report,
    Violation,
    ad,
    check_form_invariance,
    check_jacobi,
    check_symmetric_leibniz,
    is_zero_vector,
    split_admissible,
    unit,
)
from .exactmath import Coeff, coeff_to_json, coeff_from_json, simplify
from .oscillator import (
    E_0,
    E_M1,
    Lambda,
    _lam,
    build_J_mu,
    build_omega,
    build_oscillator,
    oscillator_basis,
    s_indices,
)

Tensor2 = tuple  # d x d tuple of tuples


# ---------------------------------------------------------------------------
# 2-tensors
# ---------------------------------------------------------------------------


def zero_tensor(d: int) -> Tensor2:
    return tuple((Fraction(0),) * d for _ in range(d))


def tensor(u: Sequence, v: Sequence) -> Tensor2:
    return tuple(tuple(simplify(a * b) for b in v) for a in u)


def tadd(*ts: Tensor2) -> Tensor2:
    return tuple(
        tuple(simplify(sum(cells, Fraction(0))) for cells in zip(*rows)) for rows in zip(*ts)
    )


def tscale(a, t: Tensor2) -> Tensor2:
    return tuple(tuple(simplify(a * x) for x in row) for row in t)


def tsub(s: Tensor2, t: Tensor2) -> Tensor2:
    return tadd(s, tscale(-1, t))


def twist(t: Tensor2) -> Tensor2:
    return tuple(zip(*t))


def wedge(u: Sequence, v: Sequence) -> Tensor2:
    return tsub(tensor(u, v), tensor(v, u))


def sym(u: Sequence, v: Sequence) -> Tensor2:
    return tadd(tensor(u, v), tensor(v, u))


def is_zero_tensor(t) -> bool:
    return all(x == 0 for row in t for x in row)


def tflat(t: Tensor2) -> tuple:
    return tuple(x for row in t for x in row)


def _matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Tensor2:
    bt = list(zip(*b))
    return tuple(
        tuple(simplify(sum((x * y for x, y in zip(row, col) if x != 0 and y != 0), Fraction(0))) for col in bt)
        for row in a
    )


def apply_endo(L: LinearMap, t: Tensor2) -> Tensor2:
    """(L ⊗ I + I ⊗ L) t."""
    m = L.matrix
    return tadd(_matmul(m, t), _matmul(t, tuple(zip(*m))))


def left_slot(L: LinearMap, t: Tensor2) -> Tensor2:
    """(L ⊗ I) t."""
    return _matmul(L.matrix, t)


def right_slot(t: Tensor2, L: LinearMap) -> Tensor2:
    """(I ⊗ L) t."""
    return _matmul(t, tuple(zip(*L.matrix)))


def ad_on_tensor(bracket: BilinearMap, u: Sequence, r: Tensor2) -> Tensor2:
    return apply_endo(ad(bracket, u), r)


def sharp(r: Tensor2, alpha: Sequence) -> tuple:
    """r_#(α) with β(r_#(α)) = r(α, β)."""
    d = len(r)
    return tuple(simplify(sum((alpha[j] * r[j][k] for j in range(d) if alpha[j] != 0), Fraction(0))) for k in range(d))


# ---------------------------------------------------------------------------
# r-tensors and coproducts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RTensor:
    basis: Basis
    matrix: Tensor2

    def __post_init__(self):
        d = self.basis.dim
        m = tuple(tuple(simplify(x) for x in row) for row in self.matrix)
        if len(m) != d or any(len(row) != d for row in m):
            raise ValueError("r must be a dim x dim matrix")
        for j in range(d):
            for k in range(d):
                if m[j][k] != -m[k][j]:
                    raise ValueError(f"r is not skew at ({j},{k})")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pairs(cls, basis: Basis, pairs: Sequence[tuple[int, int, Coeff]]) -> "RTensor":
        """Sum of coeff * b_j ∧ b_k."""
        d = basis.dim
        t = zero_tensor(d)
        for j, k, c in pairs:
            t = tadd(t, tscale(c, wedge(unit(d, j), unit(d, k))))
        return cls(basis, t)

    @classmethod
    def zero(cls, basis: Basis) -> "RTensor":
        return cls(basis, zero_tensor(basis.dim))

    def in_wedge2_S(self) -> bool:
        """True when r_#(e_{-1}^*) = r_#(e_0^*) = 0."""
        return all(x == 0 for x in self.matrix[E_M1]) and all(x == 0 for x in self.matrix[E_0])

    def to_json(self) -> list:
        d = self.basis.dim
        return [
            {"j": j, "k": k, "coeff": coeff_to_json(self.matrix[j][k])}
            for j in range(d)
            for k in range(j + 1, d)
            if self.matrix[j][k] != 0
        ]

    @classmethod
    def from_json(cls, basis: Basis, data: list) -> "RTensor":
        return cls.from_pairs(basis, [(p["j"], p["k"], coeff_from_json(p["coeff"])) for p in data])


@dataclass(frozen=True)
class Coproduct:
    """Δ(b_i) = images[i], a 2-tensor."""

    basis: Basis
    images: tuple[Tensor2, ...]
    flags: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        d = self.basis.dim
        if len(self.images) != d:
            raise ValueError("one image per basis vector is required")
        object.__setattr__(
            self, "images", tuple(tuple(tuple(simplify(x) for x in row) for row in t) for t in self.images)
        )
        if any(len(t) != d or any(len(row) != d for row in t) for t in self.images):
            raise ValueError("coproduct images must be dim x dim")

    @classmethod
    def zero(cls, basis: Basis) -> "Coproduct":
        return cls(basis, tuple(zero_tensor(basis.dim) for _ in range(basis.dim)))

    @property
    def dim(self) -> int:
        return self.basis.dim

    def __call__(self, x: Sequence) -> Tensor2:
        d = self.dim
        out = zero_tensor(d)
        for i, xi in enumerate(x):
            if xi != 0:
                out = tadd(out, tscale(xi, self.images[i]))
        return out

    def __add__(self, other: "Coproduct") -> "Coproduct":
        return Coproduct(self.basis, tuple(tadd(a, b) for a, b in zip(self.images, other.images)))

    def __sub__(self, other: "Coproduct") -> "Coproduct":
        return Coproduct(self.basis, tuple(tsub(a, b) for a, b in zip(self.images, other.images)))

    def map(self, f) -> "Coproduct":
        return Coproduct(self.basis, tuple(f(t) for t in self.images))

    def entries(self) -> list[tuple[int, int, int, Coeff]]:
        d = self.dim
        return [
            (i, j, k, self.images[i][j][k])
            for i in range(d)
            for j in range(d)
            for k in range(d)
            if self.images[i][j][k] != 0
        ]

    def to_json(self) -> dict:
        return {
            "role": "coproduct",
            "dim": self.dim,
            "basis": list(self.basis.labels),
            "product": [{"i": i, "j": j, "k": k, "coeff": coeff_to_json(c)} for i, j, k, c in self.entries()],
        }

    @classmethod
    def from_entries(cls, basis: Basis, entries) -> "Coproduct":
        d = basis.dim
        imgs = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for i, j, k, c in entries:
            imgs[i][j][k] = imgs[i][j][k] + c
        return cls(basis, tuple(tuple(map(tuple, t)) for t in imgs))


def twist_split(delta: Coproduct) -> tuple[Coproduct, Coproduct]:
    """(Δ_L, Δ_a) = (½(Δ − τΔ), ½(Δ + τΔ))."""
    half = Fraction(1, 2)
    skew = delta.map(lambda t: tscale(half, tsub(t, twist(t))))
    symm = delta.map(lambda t: tscale(half, tadd(t, twist(t))))
    return skew, symm


def dual_basis(basis: Basis) -> Basis:
    return Basis(tuple(f"{lab}*" for lab in basis.labels))


def dual_product(delta: Coproduct) -> BilinearMap:
    """Product on g* with b_j^* ∘ b_k^* = sum_i Δ(b_i)[j][k] b_i^*."""
    return BilinearMap(dual_basis(delta.basis), [(j, k, i, c) for i, j, k, c in delta.entries()])


def check_cocycle(bracket: BilinearMap, delta: Coproduct) -> Report:
    """Δ([u,v]) = ad_u Δ(v) − ad_v Δ(u) on basis pairs."""
    d, lab = bracket.dim, bracket.basis.labels
    rep = Report("cocycle")
    for i in range(d):
        for j in range(i + 1, d):
            u, v = unit(d, i), unit(d, j)
            res = tsub(
                delta(bracket.basis_product(i, j)),
                tsub(ad_on_tensor(bracket, u, delta.images[j]), ad_on_tensor(bracket, v, delta.images[i])),
            )
            rep.checked += 1
            if not is_zero_tensor(res):
                rep.violations.append(Violation((lab[i], lab[j]), tflat(res)))
    return rep


# ---------------------------------------------------------------------------
# the double Phi(A) = A ⊕ A*
# ---------------------------------------------------------------------------


def build_phi(product: BilinearMap, delta: Coproduct) -> BilinearMap:
    """Product on A ⊕ A* (A first, then the dual basis).

    (x+α)(y+β) = x•y + L*_α y + R*_β x + α∘β + L*_x β + R*_y α with
    <L*_x α, y> = <α, y•x> and <R*_x α, y> = <α, x•y>; symmetrically on A*.
    """
    if product.basis != delta.basis:
        raise ValueError("product and coproduct live on different bases")
    d = product.dim
    img = delta.images
    basis = Basis(product.basis.labels + dual_basis(product.basis).labels)
    entries = []
    for i in range(d):
        for j in range(d):
            for m in range(d):
                # x_i • x_j
                c = product.coeff(i, j, m)
                if c != 0:
                    entries.append((i, j, m, c))
                # x_i · β_j = R*_β x + L*_x β
                if img[i][j][m] != 0:
                    entries.append((i, d + j, m, img[i][j][m]))
                c = product.coeff(m, i, j)
                if c != 0:
                    entries.append((i, d + j, d + m, c))
                # α_i · y_j = L*_α y + R*_y α
                if img[j][m][i] != 0:
                    entries.append((d + i, j, m, img[j][m][i]))
                c = product.coeff(j, m, i)
                if c != 0:
                    entries.append((d + i, j, d + m, c))
                # α_i ∘ α_j
                if img[m][i][j] != 0:
                    entries.append((d + i, d + j, d + m, img[m][i][j]))
    return BilinearMap(basis, entries)


def phi_pairing(dim2: int, basis: Basis) -> BilinearForm:
    d = dim2 // 2
    m = [[Fraction(0)] * dim2 for _ in range(dim2)]
    for i in range(d):
        m[i][d + i] = m[d + i][i] = Fraction(1)
    return BilinearForm(basis, tuple(map(tuple, m)), "symmetric")


def check_phi_pairing_invariance(phi: BilinearMap) -> Report:
    """B(u.v, w) = B(u, v.w) for B(x+α, y+β) = α(y) + β(x)."""
    if phi.dim % 2:
        raise PreconditionError("the double has even dimension")
    rep = check_form_invariance(phi_pairing(phi.dim, phi.basis), phi, "product")
    rep.name = "phi_pairing_invariance"
    return rep


# ---------------------------------------------------------------------------
# symmetric Leibniz bialgebra conditions
# ---------------------------------------------------------------------------


@dataclass
class BialgebraReport:
    conditions: dict[int, Report]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.conditions.values())

    def failed(self) -> list[int]:
        return [k for k, r in self.conditions.items() if not r.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "conditions": {str(k): r.to_json() for k, r in self.conditions.items()},
        }


def _compose_left(outer: Coproduct, t: Tensor2):
    """(outer ⊗ I)(t) as a sparse 3-tensor {(a, b, k): coeff}."""
    d = len(t)
    out: dict = {}
    for j in range(d):
        for k in range(d):
            c = t[j][k]
            if c == 0:
                continue
            img = outer.images[j]
            for a in range(d):
                for b in range(d):
                    if img[a][b] != 0:
                        key = (a, b, k)
                        out[key] = simplify(out.get(key, Fraction(0)) + c * img[a][b])
    return {k: v for k, v in out.items() if v != 0}


def _right_mult(p: BilinearMap, x: Sequence) -> LinearMap:
    d = p.dim
    return LinearMap.from_images(p.basis, [p(unit(d, j), x) for j in range(d)])


def check_leibniz_bialgebra(L_product: BilinearMap, delta: Coproduct) -> BialgebraReport:
    """Six-condition characterization of symmetric Leibniz bialgebras.

    With [x,y] = ½(xy − yx) and x•y = ½(xy + yx):
      1. (L, [,], Δ_L) is a Lie bialgebra (cocycle + dual Jacobi),
      2. (Δ_a⊗I)Δ_a = (Δ_a⊗I)Δ_L = (Δ_L⊗I)Δ_a = 0,
      3. Δ_a(x•y) = Δ_L(x•y) = Δ_a([x,y]) = 0,
      4. y·_a Δ_a(x) + Δ_a(y)·_a x = 0,
      5. x·_a Δ_L(y) − Δ_a(x)·_L y = 0,
      6. x·_L Δ_a(y) − Δ_L(x)·_a y = 0.
    """
    if not check_symmetric_leibniz(L_product).passed:
        raise PreconditionError("product is not symmetric Leibniz")
    d, lab = L_product.dim, L_product.basis.labels
    comm, dot = split_admissible(L_product)
    bracket = comm.scale(Fraction(1, 2))
    dL, da = twist_split(delta)
    conds: dict[int, Report] = {}

    # 1
    rep = Report("1: Lie bialgebra (cocycle + dual Jacobi)")
    co = check_cocycle(bracket, dL)
    rep.violations += [Violation(("cocycle",) + v.where, v.residual) for v in co.violations]
    jac = check_jacobi(dual_product(dL))
    rep.violations += [Violation(("dual_jacobi",) + v.where, v.residual) for v in jac.violations]
    rep.checked = co.checked + jac.checked
    conds[1] = rep

    # 2
    rep = Report("2: coassociativity-type vanishings")
    for i in range(d):
        for name, outer, inner in (("aa", da, da), ("aL", da, dL), ("La", dL, da)):
            t3 = _compose_left(outer, inner.images[i])
            rep.checked += 1
            if t3:
                rep.violations.append(Violation((name, lab[i]), tuple(t3[k] for k in sorted(t3))))
    conds[2] = rep

    # 3
    rep = Report("3: vanishing on products")
    for i in range(d):
        for j in range(d):
            xy_dot = dot.basis_product(i, j)
            xy_br = bracket.basis_product(i, j)
            for name, t in (("a(x•y)", da(xy_dot)), ("L(x•y)", dL(xy_dot)), ("a([x,y])", da(xy_br))):
                rep.checked += 1
                if not is_zero_tensor(t):
                    rep.violations.append(Violation((name, lab[i], lab[j]), tflat(t)))
    conds[3] = rep

    dot_left = [LinearMap.from_images(dot.basis, [dot.basis_product(i, j) for j in range(d)]) for i in range(d)]
    dot_right = [_right_mult(dot, unit(d, i)) for i in range(d)]
    br_left = [ad(bracket, unit(d, i)) for i in range(d)]
    br_right = [_right_mult(bracket, unit(d, i)) for i in range(d)]

    def check_pairs(number, title, f):
        rep = Report(title)
        for i in range(d):
            for j in range(d):
                t = f(i, j)
                rep.checked += 1
                if not is_zero_tensor(t):
                    rep.violations.append(Violation((lab[i], lab[j]), tflat(t)))
        conds[number] = rep

    # x = b_i, y = b_j throughout
    check_pairs(4, "4: y·_a Δ_a(x) + Δ_a(y)·_a x",
                lambda i, j: tadd(left_slot(dot_left[j], da.images[i]), right_slot(da.images[j], dot_right[i])))
    check_pairs(5, "5: x·_a Δ_L(y) − Δ_a(x)·_L y",
                lambda i, j: tsub(left_slot(dot_left[i], dL.images[j]), right_slot(da.images[i], br_right[j])))
    check_pairs(6, "6: x·_L Δ_a(y) − Δ_L(x)·_a y",
                lambda i, j: tsub(left_slot(br_left[i], da.images[j]), right_slot(dL.images[i], dot_right[j])))
    return BialgebraReport(conds)


# ---------------------------------------------------------------------------
# oscillator constructions
# ---------------------------------------------------------------------------


def omega_r1_r2(omega: BilinearForm, r1: RTensor, r2: RTensor) -> RTensor:
    """ω_{r1,r2}(α, β) = ½(ω(r1#α, r2#β) + ω(r2#α, r1#β))."""
    d = omega.basis.dim
    s1 = [sharp(r1.matrix, unit(d, a)) for a in range(d)]
    s2 = [sharp(r2.matrix, unit(d, a)) for a in range(d)]
    half = Fraction(1, 2)
    m = tuple(
        tuple(simplify(half * (omega(s1[a], s2[b]) + omega(s2[a], s1[b]))) for b in range(d)) for a in range(d)
    )
    return RTensor(omega.basis, m)


def _require_S(r: RTensor):
    if not r.in_wedge2_S():
        raise PreconditionError("r must lie in ∧²S")


def _require_in_S(u0: Sequence):
    if u0[E_M1] != 0 or u0[E_0] != 0:
        raise PreconditionError("u0 must lie in S")


def check_r_condition(lam, r: RTensor, mu: Sequence) -> RTensor:
    """Residual ω_{r, ad_{e-1} r} − (J^μ ∘ ad_{e-1}) r; zero iff the condition holds."""
    lam = _lam(lam)
    _require_S(r)
    bracket = build_oscillator(lam)
    d = lam.dim
    ad_e = ad(bracket, unit(d, E_M1))
    adr = RTensor(r.basis, apply_endo(ad_e, r.matrix))
    J = build_J_mu(mu, lam.n)
    first = omega_r1_r2(build_omega(lam.n), r, adr)
    # J^μ acting on the tensor ad_{e-1} r, not the composite endomorphism
    second = apply_endo(J, adr.matrix)
    return RTensor(r.basis, tsub(first.matrix, second))


def build_delta_lie(lam, r: RTensor, u0: Sequence, mu: Sequence) -> Coproduct:
    """Δ(u) = ad_u r + 2 e0 ∧ ((J^μ + ad_{u0})(u))."""
    lam = _lam(lam)
    _require_S(r)
    _require_in_S(u0)
    bracket = build_oscillator(lam)
    d = lam.dim
    J = build_J_mu(mu, lam.n)
    W = J + ad(bracket, u0)
    e0 = unit(d, E_0)
    images = []
    for i in range(d):
        u = unit(d, i)
        images.append(tadd(ad_on_tensor(bracket, u, r.matrix), tscale(2, wedge(e0, W(u)))))
    res = check_r_condition(lam, r, mu)
    return Coproduct(bracket.basis, tuple(images), {"r_condition": is_zero_tensor(res.matrix)})


def build_delta_leibniz(lam, gamma, r: RTensor, u0: Sequence, mu: Sequence) -> Coproduct:
    """Δ(e0) = 0, Δ(e-1) = γ e0⊙e0 + ad_{e-1} r − 2 e0∧D(u0), Δ(u) = ad_u r + 2 e0∧J^μ(u) on S.

    The r-condition is not enforced; ``flags["r_condition"]`` records it.
    """
    lam = _lam(lam)
    _require_S(r)
    _require_in_S(u0)
    bracket = build_oscillator(lam)
    d = lam.dim
    J = build_J_mu(mu, lam.n)
    e0, em1 = unit(d, E_0), unit(d, E_M1)
    images = [zero_tensor(d) for _ in range(d)]
    Du0 = bracket(em1, u0)
    images[E_M1] = tadd(
        tscale(gamma, sym(e0, e0)),
        ad_on_tensor(bracket, em1, r.matrix),
        tscale(-2, wedge(e0, Du0)),
    )
    for i in s_indices(lam.n):
        u = unit(d, i)
        images[i] = tadd(ad_on_tensor(bracket, u, r.matrix), tscale(2, wedge(e0, J(u))))
    res = check_r_condition(lam, r, mu)
    return Coproduct(bracket.basis, tuple(images), {"r_condition": is_zero_tensor(res.matrix)})


def expected_dual_bracket(lam, r: RTensor, u0: Sequence, mu: Sequence) -> BilinearMap:
    """Dual bracket assembled directly from the closed formulas on S*.

    [e0*, α] = 2 (J^μ)*α − 2 (ad*_{e-1} α)(u0) e-1* + i_{r#α} ω,
    [α, β]   = (ad_{e-1} r)(α, β) e-1*,   e-1* central,
    with transposes (J*α = α∘J, ad*α = α∘ad).
    """
    lam = _lam(lam)
    bracket = build_oscillator(lam)
    d = lam.dim
    J = build_J_mu(mu, lam.n)
    omega = build_omega(lam.n)
    ad_e = ad(bracket, unit(d, E_M1))
    adr = apply_endo(ad_e, r.matrix)
    Du0 = ad_e(u0)
    entries = []
    S = s_indices(lam.n)
    for a in S:
        ra = sharp(r.matrix, unit(d, a))
        vec = [Fraction(0)] * d
        for m in range(d):
            vec[m] = simplify(2 * J.matrix[a][m] + omega(ra, unit(d, m)))
        vec[E_M1] = simplify(vec[E_M1] - 2 * Du0[a])
        for m, c in enumerate(vec):
            if c != 0:
                entries.append((E_0, a, m, c))
                entries.append((a, E_0, m, -c))
        for b in S:
            if adr[a][b] != 0:
                entries.append((a, b, E_M1, adr[a][b]))
    return BilinearMap(dual_basis(bracket.basis), entries)

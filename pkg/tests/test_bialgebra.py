from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_rationals, rationals
from oscpoisson.algebra import (
    Basis,
    BilinearMap,
    PreconditionError,
    annihilator,
    check_jacobi,
    check_symmetric_leibniz,
    unit,
)
from oscpoisson.bialgebra import (
    Coproduct,
    RTensor,
    ad_on_tensor,
    build_delta_leibniz,
    build_delta_lie,
    build_phi,
    check_cocycle,
    check_leibniz_bialgebra,
    check_phi_pairing_invariance,
    check_r_condition,
    dual_product,
    expected_dual_bracket,
    is_zero_tensor,
    omega_r1_r2,
    sym,
    tadd,
    tscale,
    twist,
    twist_split,
    wedge,
)
from oscpoisson.exactmath import Poly
from oscpoisson.oscillator import (
    E_0,
    E_M1,
    build_omega,
    build_oscillator,
    e,
    ec,
    leibniz_product,
    oscillator_basis,
)

a, c, gamma = Poly.var("a"), Poly.var("c"), Poly.var("gamma")
B1 = oscillator_basis(1)
B2 = oscillator_basis(2)
OSC1 = build_oscillator((1,))


def u(d, i):
    return unit(d, i)


def test_twist_split_examples():
    delta = Coproduct.from_entries(B1, [(E_M1, E_0, e(1), 1)])
    dL, da = twist_split(delta)
    half = F(1, 2)
    assert dL.images[E_M1] == tscale(half, wedge(u(4, E_0), u(4, e(1))))
    assert da.images[E_M1] == tscale(half, sym(u(4, E_0), u(4, e(1))))
    skew = Coproduct(B1, tuple(wedge(u(4, i), u(4, (i + 1) % 4)) for i in range(4)))
    assert twist_split(skew)[1] == Coproduct.zero(B1)


def test_twist_split_of_leibniz_coproduct():
    r = RTensor.from_pairs(B1, [(e(1), ec(1), a)])
    delta = build_delta_leibniz((1,), gamma, r, u(4, e(1)), [Poly.var("mu1")])
    _, da = twist_split(delta)
    assert da.images[E_M1] == tscale(gamma, sym(u(4, E_0), u(4, E_0)))
    assert all(is_zero_tensor(da.images[i]) for i in range(1, 4))


def test_ad_on_tensor_examples():
    assert is_zero_tensor(ad_on_tensor(OSC1, u(4, E_M1), wedge(u(4, e(1)), u(4, ec(1)))))
    assert is_zero_tensor(ad_on_tensor(OSC1, u(4, e(1)), wedge(u(4, 0), u(4, 0))))
    osc12 = build_oscillator((1, 2))
    got = ad_on_tensor(osc12, u(6, E_M1), wedge(u(6, e(1)), u(6, e(2))))
    want = tadd(wedge(u(6, ec(1)), u(6, e(2))), tscale(2, wedge(u(6, e(1)), u(6, ec(2)))))
    assert got == want


def test_cocycle_examples():
    assert check_cocycle(OSC1, Coproduct.zero(B1)).passed
    r = RTensor.from_pairs(B1, [(e(1), ec(1), 3)])
    assert check_cocycle(OSC1, build_delta_lie((1,), r, u(4, e(1)), [2])).passed
    bad = Coproduct(B1, tuple(wedge(u(4, E_M1), u(4, i)) for i in range(4)))
    rep = check_cocycle(OSC1, bad)
    assert ("e1", "ê1") in [v.where for v in rep.violations]


def test_dual_product_examples():
    assert dual_product(Coproduct.zero(B1)).entries() == []
    delta = Coproduct.from_entries(B1, [(E_M1, E_0, E_0, 2)])  # e0 ⊙ e0
    dp = dual_product(delta)
    assert dp.entries() == [(E_0, E_0, E_M1, 2)]
    assert u(4, E_M1) in annihilator(dp)


def test_dual_bracket_matches_closed_formulas():
    r = RTensor.from_pairs(B1, [(e(1), ec(1), a)])
    u0 = (0, 0, 1, 2)
    mu = [3]
    delta = build_delta_lie((1,), r, u0, mu)
    dual = dual_product(delta)
    assert dual == expected_dual_bracket((1,), r, u0, mu)
    assert check_jacobi(dual).passed
    assert all(dual.basis_product(E_M1, j) == (0,) * 4 for j in range(4))


def test_phi_examples():
    phi = build_phi(OSC1, Coproduct.zero(B1))
    assert phi.dim == 8
    assert check_jacobi(phi).passed
    assert check_phi_pairing_invariance(phi).passed
    ab = BilinearMap(Basis(("x", "y")), [])
    phi = build_phi(ab, Coproduct.zero(ab.basis))
    assert phi.entries() == []
    assert check_phi_pairing_invariance(phi).passed


def test_phi_of_leibniz_bialgebra():
    r = RTensor.from_pairs(B1, [(e(1), ec(1), a)])
    delta = build_delta_leibniz((1,), gamma, r, u(4, e(1)), [Poly.var("mu1")])
    phi = build_phi(leibniz_product((1,), "c"), delta)
    assert check_symmetric_leibniz(phi).passed
    assert check_phi_pairing_invariance(phi).passed


def test_leibniz_bialgebra_examples():
    r = RTensor.from_pairs(B1, [(e(1), ec(1), a)])
    delta = build_delta_leibniz((1,), gamma, r, u(4, e(1)), [Poly.var("mu1")])
    rep = check_leibniz_bialgebra(leibniz_product((1,), "c"), delta)
    assert rep.passed and sorted(rep.conditions) == [1, 2, 3, 4, 5, 6]
    assert check_leibniz_bialgebra(build_oscillator((1, 3)), Coproduct.zero(B2)).passed


def test_injected_symmetric_part_fails():
    r = RTensor.from_pairs(B1, [(e(1), ec(1), a)])
    delta = build_delta_leibniz((1,), gamma, r, u(4, e(1)), [1])
    bad = delta + Coproduct.from_entries(B1, [(E_M1, e(1), e(1), 2)])
    rep = check_leibniz_bialgebra(leibniz_product((1,), "c"), bad)
    assert not rep.passed
    assert 5 in rep.failed()
    cond5 = {v.where: v.residual for v in rep.conditions[5].violations}
    residual = cond5[("e-1", "ê1")]
    assert residual[e(1) * 4 + E_0] != 0  # e1 ⊗ e0 component


def test_gamma_zero_slice_still_passes():
    # the six conditions do not force γ ≠ 0
    r = RTensor.from_pairs(B1, [(e(1), ec(1), a)])
    delta = build_delta_leibniz((1,), 0, r, u(4, e(1)), [1])
    assert check_leibniz_bialgebra(leibniz_product((1,), "c"), delta).passed


def test_omega_r1_r2_examples():
    w = build_omega(1)
    r = RTensor.from_pairs(B1, [(e(1), ec(1), 1)])
    assert omega_r1_r2(w, r, RTensor.zero(B1)) == RTensor.zero(B1)
    # r_#(e1*) = ê1 and r_#(ê1*) = -e1 under β(r_#α) = r(α, β)
    assert omega_r1_r2(w, r, r).matrix[e(1)][ec(1)] == 1


def test_r_condition_examples():
    r = RTensor.from_pairs(B1, [(e(1), ec(1), a)])
    for mu in ([0], [3], [Poly.var("mu1")]):
        assert is_zero_tensor(check_r_condition((1,), r, mu).matrix)
    assert is_zero_tensor(check_r_condition((1, 3), RTensor.zero(B2), [1, 2]).matrix)


def test_r_condition_two_modes():
    r = RTensor.from_pairs(B2, [(e(1), e(2), 1)])
    # with μ = 0 both terms vanish for this r
    assert is_zero_tensor(check_r_condition((1, 3), r, [0, 0]).matrix)
    # with μ = (1, 0): residual = -J(ad r) = e1∧e2 - 3 ê1∧ê2
    res = check_r_condition((1, 3), r, [1, 0])
    want = tadd(wedge(u(6, e(1)), u(6, e(2))), tscale(-3, wedge(u(6, ec(1)), u(6, ec(2)))))
    assert res.matrix == want


def test_r_condition_requires_S():
    with pytest.raises(PreconditionError):
        check_r_condition((1,), RTensor.from_pairs(B1, [(E_M1, e(1), 1)]), [0])


def test_build_delta_lie_examples():
    assert build_delta_lie((1,), RTensor.zero(B1), (0,) * 4, [0]) == Coproduct.zero(B1)
    r = RTensor.from_pairs(B1, [(e(1), ec(1), 1)])
    delta = build_delta_lie((1,), r, (0,) * 4, [0])
    assert is_zero_tensor(delta.images[E_M1])
    assert delta.images[e(1)] == wedge(u(4, e(1)), u(4, E_0))
    assert delta.images[ec(1)] == wedge(u(4, ec(1)), u(4, E_0))
    assert delta.flags["r_condition"]


def test_build_delta_leibniz_examples():
    assert build_delta_leibniz((1,), 0, RTensor.zero(B1), (0,) * 4, [0]) == Coproduct.zero(B1)
    r = RTensor.from_pairs(B1, [(e(1), ec(1), 1)])
    delta = build_delta_leibniz((1,), 1, r, u(4, e(1)), [1])
    # γ e0⊙e0 − 2 e0∧D(e1) with D(e1) = ê1
    want = tadd(sym(u(4, E_0), u(4, E_0)), tscale(-2, wedge(u(4, E_0), u(4, ec(1)))))
    assert delta.images[E_M1] == want


def test_flag_on_failed_r_condition():
    r = RTensor.from_pairs(B2, [(e(1), e(2), 1)])
    delta = build_delta_lie((1, 3), r, (0,) * 6, [1, 0])
    assert not delta.flags["r_condition"]
    assert not check_jacobi(dual_product(delta)).passed


# -- properties ------------------------------------------------------------


@given(st.lists(rationals(), min_size=16, max_size=16))
def test_twist_split_recombines(vals):
    t = tuple(tuple(vals[4 * j: 4 * j + 4]) for j in range(4))
    delta = Coproduct(B1, (t, twist(t), t, (((0,) * 4),) * 4))
    dL, da = twist_split(delta)
    assert dL + da == delta
    assert all(twist(x) == tscale(-1, x) for x in dL.images)
    assert all(twist(x) == x for x in da.images)


def _s_data(draw, n):
    d = 2 * n + 2
    u0 = [0, 0] + [draw(rationals()) for _ in range(2 * n)]
    mu = [draw(rationals()) for _ in range(n)]
    return tuple(u0), mu


@given(st.data())
def test_forward_direction_lie(data):
    n = data.draw(st.sampled_from([1, 2]))
    lam = (1,) if n == 1 else (1, 3)
    basis = oscillator_basis(n)
    # r in the span of the e_i ∧ ê_i has ad_{e-1} r = 0, so the condition holds
    r = RTensor.from_pairs(basis, [(e(j), ec(j), data.draw(rationals())) for j in range(1, n + 1)])
    u0, mu = _s_data(data.draw, n)
    delta = build_delta_lie(lam, r, u0, mu)
    assert delta.flags["r_condition"]
    assert check_cocycle(build_oscillator(lam), delta).passed
    dual = dual_product(delta)
    assert check_jacobi(dual).passed
    assert dual == expected_dual_bracket(lam, r, u0, mu)


@given(st.data())
def test_r_condition_matches_dual_jacobi(data):
    lam = data.draw(st.sampled_from([(1, 3), (1, 2), (2, 5)]))
    S = range(2, 6)
    pairs = [(j, k) for j in S for k in S if j < k]
    r = RTensor.from_pairs(B2, [(j, k, data.draw(st.integers(-1, 1))) for j, k in pairs])
    u0, mu = _s_data(data.draw, 2)
    mu = [data.draw(st.integers(-1, 1)) for _ in range(2)]
    residual_zero = is_zero_tensor(check_r_condition(lam, r, mu).matrix)
    delta = build_delta_lie(lam, r, u0, mu)
    assert check_cocycle(build_oscillator(lam), delta).passed
    assert residual_zero == check_jacobi(dual_product(delta)).passed


@given(rationals(), nonzero_rationals(), rationals(), st.data())
def test_forward_direction_leibniz(cval, g, aval, data):
    u0, mu = _s_data(data.draw, 1)
    r = RTensor.from_pairs(B1, [(e(1), ec(1), aval)])
    delta = build_delta_leibniz((1,), g, r, u0, mu)
    assert check_leibniz_bialgebra(leibniz_product((1,), cval), delta).passed


@given(st.lists(rationals(), min_size=4, max_size=4))
def test_phi_pairing_always_invariant(vals):
    r = RTensor.from_pairs(B1, [(e(1), ec(1), vals[0])])
    delta = build_delta_leibniz((1,), vals[1], r, (0, 0, vals[2], 0), [vals[3]])
    phi = build_phi(leibniz_product((1,), vals[2]), delta)
    assert check_phi_pairing_invariance(phi).passed


@given(st.lists(rationals(), min_size=16, max_size=16))
def test_omega_r1_r2_is_skew(vals):
    w = build_omega(1)
    m1 = [[0] * 4 for _ in range(4)]
    m1[2][3], m1[3][2] = vals[0], -vals[0]
    r1 = RTensor(B1, m1)
    r2 = RTensor.from_pairs(B1, [(2, 3, vals[1]), (0, 2, vals[2]), (1, 3, vals[3])])
    out = omega_r1_r2(w, r1, r2).matrix
    assert all(out[i][j] == -out[j][i] for i in range(4) for j in range(4))

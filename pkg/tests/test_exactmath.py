from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_rationals, rationals
from oscpoisson.exactmath import (
    AffineSolutionSpace,
    InconsistentSystem,
    Matrix,
    MissingVariable,
    Poly,
    coeff_from_json,
    coeff_to_json,
    nullspace,
    parse_coeff,
    poly_arith,
    poly_eval,
    scalar_arith,
    solve_linear,
)

c = Poly.var("c")
gamma = Poly.var("gamma")


def test_scalar_examples():
    assert scalar_arith("add", F(1, 2), F(1, 3)) == F(5, 6)
    assert scalar_arith("mul", F(2, 3), F(3, 2)) == 1
    assert scalar_arith("neg", F(2, 3)) == F(-2, 3)
    with pytest.raises(ZeroDivisionError):
        scalar_arith("inv", 0)


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        scalar_arith("add", 0.5, 1)


def test_poly_examples():
    assert poly_arith("mul", c, c) == c ** 2
    assert poly_arith("add", c, -c) == 0
    assert poly_arith("mul", c + 1, c - 1) == c ** 2 - 1


def test_poly_eval_examples():
    assert poly_eval(c ** 2, {"c": 3}) == 9
    assert poly_eval(Poly(), {}) == 0
    assert poly_eval(gamma * c - gamma, {"gamma": 2, "c": 5}) == 8


def test_poly_eval_missing_variable():
    with pytest.raises(MissingVariable):
        poly_eval(c * gamma, {"c": 1})


def test_poly_canonical_form():
    p = (c + gamma) * (c - gamma)
    assert p == c ** 2 - gamma ** 2
    assert hash(p) == hash(c ** 2 - gamma ** 2)
    assert repr(Poly.const(0)) == "0"
    assert (c - c).is_zero()


def test_poly_json_round_trip():
    p = F(3, 2) * c ** 2 * gamma - 7 * c + F(1, 3)
    assert coeff_from_json(coeff_to_json(p)) == p
    assert coeff_to_json(F(5, 3)) == "5/3"
    assert coeff_from_json("5/3") == F(5, 3)


def test_parse_coeff():
    assert parse_coeff("3/2") == F(3, 2)
    assert parse_coeff("a") == Poly.var("a")
    assert parse_coeff("-a") == -Poly.var("a")
    assert parse_coeff("2*gamma") == 2 * gamma
    with pytest.raises(ValueError):
        parse_coeff("1/")


def test_solve_identity():
    s = solve_linear(Matrix.identity(2), [1, 2])
    assert s.particular == (1, 2)
    assert s.dim == 0


def test_solve_zero_matrix():
    s = solve_linear(Matrix.zeros(2, 3), [0, 0])
    assert s.dim == 3
    assert s.particular == (0, 0, 0)


def test_solve_rank_one():
    s = solve_linear(Matrix.from_rows([[1, 1], [2, 2]]), [1, 2])
    assert s.particular == (1, 0)
    assert s.nullspace_basis == ((1, -1),)
    assert s.contains((F(1, 2), F(1, 2)))


def test_solve_inconsistent():
    with pytest.raises(InconsistentSystem):
        solve_linear(Matrix.from_rows([[1, 1], [2, 2]]), [1, 3])


def test_parametrized_uses_named_parameters():
    s = solve_linear(Matrix.from_rows([[1, 1, 0]]), [2])
    coords = s.parametrized()
    names = set()
    for x in coords:
        names |= set(x.variables)
    assert names == {"t1", "t2"}


def test_space_rejects_dependent_basis():
    with pytest.raises(ValueError):
        AffineSolutionSpace((0, 0), ((1, 0), (2, 0)), ("t1", "t2"))


# -- properties ------------------------------------------------------------


@given(rationals(), rationals(), rationals())
def test_field_axioms(a, b, x):
    add = lambda u, v: scalar_arith("add", u, v)
    mul = lambda u, v: scalar_arith("mul", u, v)
    assert add(add(a, b), x) == add(a, add(b, x))
    assert mul(mul(a, b), x) == mul(a, mul(b, x))
    assert mul(a, add(b, x)) == add(mul(a, b), mul(a, x))
    assert add(a, b) == add(b, a) and mul(a, b) == mul(b, a)
    assert add(a, scalar_arith("neg", a)) == 0
    if a != 0:
        assert mul(a, scalar_arith("inv", a)) == 1


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda k: st.lists(st.lists(rationals(4, 3), min_size=k, max_size=k), min_size=r, max_size=r)
    )
)


@given(matrices)
def test_rank_nullity(rows):
    A = Matrix.from_rows(rows)
    null = nullspace(A)
    assert A.rank() + len(null) == A.cols
    for v in null:
        assert all(x == 0 for x in A.apply(v))


@given(matrices, st.data())
def test_back_substitution(rows, data):
    A = Matrix.from_rows(rows)
    x0 = data.draw(st.lists(rationals(), min_size=A.cols, max_size=A.cols))
    b = A.apply(x0)
    s = solve_linear(A, b)
    ts = data.draw(st.lists(rationals(), min_size=s.dim, max_size=s.dim))
    assert A.apply(s.point(ts)) == b
    assert s.contains(x0)


polys = st.builds(
    lambda a, b, k, m: a * c ** k + b * gamma * c ** m,
    rationals(), rationals(), st.integers(0, 3), st.integers(0, 2),
)


@given(polys, polys, rationals(), rationals())
def test_eval_is_ring_homomorphism(p, q, x, y):
    env = {"c": x, "gamma": y}
    assert poly_eval(p * q, env) == poly_eval(p, env) * poly_eval(q, env)
    assert poly_eval(p + q, env) == poly_eval(p, env) + poly_eval(q, env)
    assert poly_eval(-p, env) == -poly_eval(p, env)


@given(polys)
def test_poly_json_property(p):
    assert coeff_from_json(coeff_to_json(p)) == p


@given(nonzero_rationals())
def test_division_by_scalar(a):
    assert (c * a) / a == c

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from napkin.series import (
    ONE,
    OrderMismatch,
    X,
    Y,
    XYPoly,
    ZSeries,
    derivative,
    diff_x,
    eval_x1,
    eval_y1,
    exp_monomial,
    integrate,
    solve_ode_quadratic,
)

ORDER = 6

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=7)
polys = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2)), fracs, max_size=4
).map(XYPoly)
series = st.lists(polys, min_size=ORDER + 1, max_size=ORDER + 1).map(ZSeries)


@settings(max_examples=40, deadline=None)
@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZSeries.zero(ORDER)
    assert a * 1 == a


@settings(max_examples=40, deadline=None)
@given(series)
def test_reciprocal_when_unit(a):
    u = 1 + a.shift()
    assert u * u.reciprocal() == ZSeries.const(1, ORDER)


@settings(max_examples=30, deadline=None)
@given(series)
def test_integrate_then_differentiate(a):
    assert derivative(integrate(a)) == a.truncate(ORDER - 1)


@settings(max_examples=30, deadline=None)
@given(polys, polys)
def test_poly_derivatives_are_derivations(f, g):
    assert (f * g).diff_x() == f.diff_x() * g + f * g.diff_x()
    assert (f * g).diff_y() == f.diff_y() * g + f * g.diff_y()


def test_poly_basics():
    f = (X + Y) ** 2
    assert f.coefficient(1, 1) == 2
    assert f(1, 2) == 9
    assert f.subs(x=0) == Y * Y
    assert (1 - X).constant() == 1
    assert XYPoly.from_json(f.to_json()) == f
    assert ONE * 3 == XYPoly.const(3)
    with pytest.raises(TypeError):
        X + 0.5


def test_exp_monomial_coefficients():
    e = exp_monomial(Fraction(1, 2), 0, 5)
    assert [e.egf(n).constant() for n in range(6)] == [Fraction(1, 2**n) for n in range(6)]
    ey = exp_monomial(1, 1, 3)
    assert ey[3] == XYPoly.monomial(Fraction(1, 6), 0, 3)
    assert exp_monomial(2, 0, 5) == exp_monomial(1, 0, 5) * exp_monomial(1, 0, 5)


def test_indexing_and_orders():
    s = ZSeries.geometric(4)
    assert s[4].constant() == 1
    with pytest.raises(IndexError):
        s[5]
    with pytest.raises(OrderMismatch):
        s + ZSeries.geometric(3)
    assert s.shift()[0] == XYPoly()
    assert (ZSeries.z(4) * s).first_nonzero() == 1


def test_non_unit_has_no_reciprocal():
    with pytest.raises(ZeroDivisionError):
        ZSeries.z(3).reciprocal()
    with pytest.raises(ZeroDivisionError):
        ZSeries.const(X + 1, 3).reciprocal()


def test_geometric_is_inverse_of_one_minus_z():
    assert (1 - ZSeries.z(8)).reciprocal() == ZSeries.geometric(8)


def test_json_roundtrip():
    s = exp_monomial(Fraction(2, 3), 1, 5) * (X - Y)
    assert ZSeries.from_json(s.dumps()) == s


def test_ode_methods_agree():
    # S' = S^2 gives 1/(1-z)
    r = ZSeries.const(1, 6)
    assert solve_ode_quadratic(r, 1, 7) == ZSeries.geometric(7)
    # a bivariate right-hand side
    r = 1 + exp_monomial(1, 1, 6) * (X - Y)
    a = solve_ode_quadratic(r, 1, 7, method="reciprocal")
    b = solve_ode_quadratic(r, 1, 7, method="direct")
    assert a == b
    assert derivative(a) == (r * a.truncate(6) * a.truncate(6))


def test_ode_errors():
    r = ZSeries.const(1, 3)
    with pytest.raises(OrderMismatch):
        solve_ode_quadratic(r, 1, 6)
    with pytest.raises(ValueError):
        solve_ode_quadratic(r, 1, 4, method="magic")
    with pytest.raises(ValueError):
        solve_ode_quadratic(r, X, 4)


def test_evaluations():
    s = ZSeries([1, X + Y, X * Y * 2])
    assert eval_x1(s) == ZSeries([1, 1 + Y, 2 * Y])
    assert eval_y1(eval_x1(s)) == ZSeries([1, 2, 2])
    assert diff_x(s) == ZSeries([0, 1, 2 * Y])
    assert s.euler() == ZSeries([0, X + Y, 4 * X * Y])

from fractions import Fraction
from math import factorial

import mpmath
import pytest

from napkin.genfun import build_full
from napkin.oracle import enumerate_table
from napkin.series import diff_x
from napkin.stats import (
    asymptotic_slopes,
    expectation_gf,
    expected_napkinless_exact,
    expected_napkinless_recurrence,
    expected_napkinless_series,
    finite_difference_slopes,
    moment_table,
    moments,
    principal_part,
    second_factorial_moment_gf_half,
    closed_slopes_half,
    truncated_exp,
)

# |E_n/n - slope| <= K/n! for n >= 10; measured max over n = 10..40 is 0.099
K = Fraction(1, 10)


def test_truncated_exp():
    assert truncated_exp(1, 3) == Fraction(8, 3)
    assert truncated_exp(Fraction(1, 2), 0) == 1


@pytest.mark.parametrize("p", ["1/2", "1/3", "69/100", "1/7"])
def test_three_routes_agree(p):
    g = build_full(p, 12)
    ser = expected_napkinless_series(g)
    gf = expectation_gf(p, 12)
    for n in range(1, 13):
        e = expected_napkinless_exact(n, p)
        assert e == expected_napkinless_recurrence(n, p) == ser[n].constant() == gf[n].constant()


def test_first_values():
    p = Fraction(69, 100)
    assert expected_napkinless_exact(1, p) == expected_napkinless_exact(2, p) == 0
    assert expected_napkinless_exact(3, p) == p * (1 - p) == Fraction(2139, 10000)


def test_degenerate_p():
    assert expected_napkinless_exact(5, 1) == 0
    assert expected_napkinless_recurrence(5, 0) == 0
    assert expectation_gf(0, 4).is_zero()


def test_small_moments():
    g = build_full("1/2", 4)
    m2, m3 = moments(g, 2), moments(g, 3)
    assert m2.E_frustrated == Fraction(1, 2) and m2.Var_napkinless == 0
    assert m3.E_napkinless == Fraction(1, 4) and m3.Var_napkinless == Fraction(3, 16)
    m1 = moments(g, 1)
    assert m1.E_happy == 1 and m1.Var_happy == 0 and m1.E_napkinless == 0


def test_moments_match_enumeration():
    g = build_full("2/7", 6)
    for n in range(1, 7):
        d = enumerate_table(n, "2/7")
        rep = moments(g, n)
        e_o, e_m = d.mean("o"), d.mean("m")
        var_o = sum(i * i * v for (i, _), v in d.probs.items()) - e_o**2
        cov = sum(i * j * v for (i, j), v in d.probs.items()) - e_o * e_m
        assert (rep.E_napkinless, rep.E_frustrated, rep.Var_napkinless, rep.Covar) == (e_o, e_m, var_o, cov)
        assert rep.E_napkinless + rep.E_frustrated + rep.E_happy == n


def test_moments_bounds():
    g = build_full("1/2", 3)
    with pytest.raises(ValueError):
        moments(g, 4)
    with pytest.raises(ValueError):
        moments(g, 0)
    assert len(moment_table("1/2", 5)) == 5


def test_second_factorial_moment_half():
    g = build_full("1/2", 12)
    cxx = diff_x(diff_x(g.C.subs(y=1))).subs(x=1)
    assert cxx == second_factorial_moment_gf_half(12)


@pytest.mark.parametrize("p", ["1/2", "1/3", "69/100"])
def test_convergence_rate(p):
    slope = asymptotic_slopes(p).E_napkinless
    with mpmath.workdps(50):
        for n in range(10, 31):
            e = expected_napkinless_exact(n, p) / n
            gap = abs(mpmath.mpf(e.numerator) / e.denominator - slope)
            assert gap * factorial(n) <= mpmath.mpf(K.numerator) / K.denominator


def test_slopes_half():
    s = asymptotic_slopes("1/2")
    t = closed_slopes_half()
    assert abs(s.E_napkinless - t["E_napkinless"]) < mpmath.mpf(10) ** -40
    assert abs(s.Var_napkinless - t["Var_napkinless"]) < mpmath.mpf(10) ** -40
    assert abs(s.Var_napkinless_from_poles - t["Var_napkinless"]) < mpmath.mpf(10) ** -30
    # numerically extracted principal part against its closed form
    b2, b1 = s.expectation_expansion.coefficients
    assert abs(b2 - s.b_minus2_closed) < mpmath.mpf(10) ** -30
    assert abs(b1 - s.b_minus1_closed) < mpmath.mpf(10) ** -30
    assert abs(s.E_napkinless - mpmath.mpf("0.12339675")) < 1e-8
    assert abs(t["E_happy"] - mpmath.mpf("0.702557")) < 1e-6


def test_slope_69():
    s = asymptotic_slopes("69/100")
    assert abs(s.E_napkinless - mpmath.mpf("0.1058")) < 5e-4
    assert s.Covar is None  # no closed form at general p
    with pytest.raises(ValueError):
        asymptotic_slopes(1)


def test_principal_part_simple_pole():
    # 1/(1-z) = 1/u with u = 1 - z; cleared function is constant 1
    exp = principal_part(lambda u: mpmath.mpf(1), 1, 30)
    assert exp.coefficients[0] == 1
    assert abs(exp.coefficient_estimate(10) - 1) < 1e-25


def test_finite_differences_small():
    d = finite_difference_slopes("1/2", n=5)
    g = build_full("1/2", 6)
    assert d["E_napkinless"] == moments(g, 6).E_napkinless - moments(g, 5).E_napkinless


def test_report_serialization():
    rep = moments(build_full("1/2", 3), 3)
    js = rep.to_json(with_float=True)
    assert js["exact"]["E_napkinless"] == "1/4"
    assert js["float"]["E_napkinless"] == 0.25
    assert rep.to_csv().splitlines()[0] == "n,p,statistic,num,den"


@pytest.mark.parametrize("p", ["1/2", "1/3", "69/100"])
def test_principal_part_gives_linear_estimate(p):
    s = asymptotic_slopes(p)
    b2, b1 = s.expectation_expansion.coefficients
    assert abs(b2 - s.b_minus2_closed) < mpmath.mpf(10) ** -30
    assert abs(b1 - s.b_minus1_closed) < mpmath.mpf(10) ** -30
    # (n+1) b_-2 + b_-1 is exactly n times the slope
    assert abs(b1 + b2) < mpmath.mpf(10) ** -30
    assert abs(b2 - s.E_napkinless) < mpmath.mpf(10) ** -30

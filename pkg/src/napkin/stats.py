"""Expectations, variances and covariances of napkinless and frustrated counts.

Finite-``n`` values are exact rationals read off the generating functions.
Linear growth rates ("slopes") come from the pole of order two or three at
``z = 1``; they involve ``e`` and are evaluated with :mod:`mpmath`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from .genfun import GFSet, build_full
from .model import Params
from .series import ZSeries, diff_x, exp_monomial

__all__ = [
    "StatReport",
    "AsymptoticExpansion",
    "Slopes",
    "truncated_exp",
    "expected_napkinless_exact",
    "expected_napkinless_recurrence",
    "expected_napkinless_series",
    "expectation_gf",
    "second_factorial_moment_gf_half",
    "moments",
    "moment_table",
    "finite_difference_slopes",
    "principal_part",
    "asymptotic_slopes",
    "closed_slopes_half",
]

DEFAULT_DPS = 50


def _params(params) -> Params:
    return params if isinstance(params, Params) else Params(params)


def truncated_exp(x, n: int) -> Fraction:
    """``sum_{k<=n} x**k / k!`` exactly."""
    x = Fraction(x)
    term = Fraction(1)
    total = Fraction(1)
    for k in range(1, n + 1):
        term = term * x / k
        total += term
    return total


def expected_napkinless_exact(n: int, params) -> Fraction:
    """Closed formula ``n/(pq) (1 - p e_n(q) - q e_n(p) + pq e_n(1))``."""
    params = _params(params)
    p, q = params.p, params.q
    if n < 1:
        raise ValueError("n must be at least 1")
    if p * q == 0:
        return Fraction(0)  # everyone reaches the same way; nobody goes without
    return n / (p * q) * (
        1 - p * truncated_exp(q, n) - q * truncated_exp(p, n) + p * q * truncated_exp(1, n)
    )


def expected_napkinless_recurrence(n: int, params) -> Fraction:
    """``k f(k+1) = (k+1) f(k) + (1 - p^k - q^k)/(k-1)!`` from ``f(1) = 0``."""
    params = _params(params)
    p, q = params.p, params.q
    if n < 1:
        raise ValueError("n must be at least 1")
    f = Fraction(0)
    for k in range(1, n):
        f = ((k + 1) * f + (1 - p**k - q**k) / math.factorial(k - 1)) / k
    return f


def expected_napkinless_series(g: GFSet) -> ZSeries:
    """``d/dx C(x, 1, z)`` at ``x = 1``."""
    return diff_x(g.C.subs(y=1)).subs(x=1)


def expectation_gf(params, order: int) -> ZSeries:
    """``z (pq(2-z)e^z + (p^2+pqz-1)e^{pz} + (q^2+pqz-1)e^{qz} + 1) / (pq (1-z)^2)``.

    The double pole is handled by multiplying with ``sum (n+1) z^n``.
    """
    params = _params(params)
    p, q = params.p, params.q
    if p * q == 0:
        return ZSeries.zero(order)
    z = ZSeries.z(order)
    num = (
        (2 - z) * exp_monomial(1, 0, order) * (p * q)
        + (p * p - 1 + z * (p * q)) * exp_monomial(p, 0, order)
        + (q * q - 1 + z * (p * q)) * exp_monomial(q, 0, order)
        + 1
    )
    inv_sq = ZSeries([n + 1 for n in range(order + 1)])
    return (z * num * inv_sq) * (1 / (p * q))


def second_factorial_moment_gf_half(order: int) -> ZSeries:
    """``d^2/dx^2 C(x,1,z)`` at ``x = 1`` for ``p = 1/2``, from its closed form."""
    half = Fraction(1, 2)
    e_half = exp_monomial(half, 0, order)
    e_one = exp_monomial(1, 0, order)
    z = ZSeries.z(order)
    one_z = 1 - z
    two_m = 2 - e_half
    inner = e_half * one_z * one_z + two_m * ((e_half - 1) * (e_half - 1) * (3 - z) - e_one + 2 * z)
    inv_cube = ZSeries([Fraction((n + 1) * (n + 2), 2) for n in range(order + 1)])
    return 2 * z * two_m * inner * inv_cube


@dataclass
class StatReport:
    n: int
    p: Fraction
    E_napkinless: Fraction
    E_frustrated: Fraction
    E_happy: Fraction
    Var_napkinless: Fraction
    Var_frustrated: Fraction
    Covar: Fraction
    Var_happy: Fraction
    slopes: "Slopes | None" = None

    _FIELDS = ("E_napkinless", "E_frustrated", "E_happy",
               "Var_napkinless", "Var_frustrated", "Covar", "Var_happy")

    def to_json(self, with_float: bool = False) -> dict:
        out: dict = {"n": self.n, "p": _frac_str(self.p), "exact": {}}
        for name in self._FIELDS:
            v = getattr(self, name)
            out["exact"][name] = _frac_str(v)
        if with_float:
            out["float"] = {name: float(getattr(self, name)) for name in self._FIELDS}
        if self.slopes is not None:
            out["asymptotic"] = self.slopes.to_json()
        return out

    def to_csv(self, with_float: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "p", "statistic", "num", "den"] + (["float"] if with_float else []))
        for name in self._FIELDS:
            v = getattr(self, name)
            w.writerow([self.n, _frac_str(self.p), name, v.numerator, v.denominator]
                       + ([float(v)] if with_float else []))
        return buf.getvalue()


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def moments(g: GFSet, n: int) -> StatReport:
    """Exact moments at table size ``n`` from the coefficient ``[z^n] C``."""
    if n > g.order:
        raise ValueError(f"n={n} exceeds the truncation order {g.order}")
    if n < 1:
        raise ValueError("n must be at least 1")
    cn = g.C[n]
    cx, cy = cn.diff_x(), cn.diff_y()
    e_o = cx(1, 1)
    e_m = cy(1, 1)
    e_oo = cx.diff_x()(1, 1) + e_o
    e_mm = cy.diff_y()(1, 1) + e_m
    e_om = cx.diff_y()(1, 1)
    var_o = e_oo - e_o**2
    var_m = e_mm - e_m**2
    cov = e_om - e_o * e_m
    return StatReport(
        n=n,
        p=g.params.p,
        E_napkinless=e_o,
        E_frustrated=e_m,
        E_happy=n - e_o - e_m,
        Var_napkinless=var_o,
        Var_frustrated=var_m,
        Covar=cov,
        Var_happy=var_o + var_m + 2 * cov,
    )


def moment_table(params, nmax: int, g: GFSet | None = None) -> list[StatReport]:
    if g is None:
        g = build_full(params, nmax)
    return [moments(g, n) for n in range(1, nmax + 1)]


def finite_difference_slopes(params, n: int = 39, g: GFSet | None = None) -> dict[str, Fraction]:
    """Exact ``stat(n+1) - stat(n)`` for every statistic of :class:`StatReport`."""
    if g is None or g.order < n + 1:
        g = build_full(params, n + 1)
    a, b = moments(g, n), moments(g, n + 1)
    return {name: getattr(b, name) - getattr(a, name) for name in StatReport._FIELDS}


@dataclass
class AsymptoticExpansion:
    """Principal part ``sum_k b[-k] / (1-z)^k`` of a generating function at ``z = 1``."""

    pole_order: int
    coefficients: list  # b_{-m}, ..., b_{-1} as mpmath numbers
    dps: int = DEFAULT_DPS

    def coefficient_estimate(self, n: int):
        """``sum_k binom(n+k-1, k-1) b_{-k}``, which matches ``[z^n]`` up to ``O(1/n!)``."""
        m = self.pole_order
        total = mpmath.mpf(0)
        for idx, b in enumerate(self.coefficients):
            k = m - idx
            total += mpmath.binomial(n + k - 1, k - 1) * b
        return total


def principal_part(cleared, pole_order: int, dps: int = DEFAULT_DPS) -> AsymptoticExpansion:
    """Principal part from ``cleared(u) = u**m f(1-u)``, analytic at ``u = 0``."""
    with mpmath.workdps(dps + 10):
        taylor = mpmath.taylor(cleared, 0, pole_order - 1)
        coeffs = [+taylor[k] for k in range(pole_order)]
    return AsymptoticExpansion(pole_order, coeffs, dps)


def _expectation_cleared(p, q):
    """``u^2 E(1-u)``."""
    def f(u):
        z = 1 - u
        return z * (p * q * (2 - z) * mpmath.exp(z) + (p * p + p * q * z - 1) * mpmath.exp(p * z)
                    + (q * q + p * q * z - 1) * mpmath.exp(q * z) + 1) / (p * q)
    return f


def _second_factorial_cleared_half(u):
    """``u^3 C_xx(1/2; 1, 1, 1-u)``."""
    z = 1 - u
    eh = mpmath.exp(z / 2)
    return 2 * z * (2 - eh) * (eh * u**2 + (2 - eh) * ((eh - 1) ** 2 * (3 - z) - mpmath.exp(z) + 2 * z))


@dataclass
class Slopes:
    """Per-guest growth rates, ``lim stat_n / n``."""

    p: Fraction
    dps: int
    E_napkinless: object
    Var_napkinless: object
    expectation_expansion: AsymptoticExpansion
    b_minus2_closed: object
    b_minus1_closed: object
    E_frustrated: object = None
    E_happy: object = None
    Var_frustrated: object = None
    Covar: object = None
    Var_napkinless_from_poles: object = None
    extra: dict = field(default_factory=dict)

    def to_json(self, digits: int = 15) -> dict:
        def s(v):
            return None if v is None else mpmath.nstr(v, digits)

        out = {
            "precision_digits": digits,
            "working_dps": self.dps,
            "E_napkinless": s(self.E_napkinless),
            "Var_napkinless": s(self.Var_napkinless),
            "E_frustrated": s(self.E_frustrated),
            "E_happy": s(self.E_happy),
            "Var_frustrated": s(self.Var_frustrated),
            "Covar": s(self.Covar),
            "b_minus2": s(self.expectation_expansion.coefficients[0]),
            "b_minus1": s(self.expectation_expansion.coefficients[1]),
        }
        return out


def closed_slopes_half(dps: int = DEFAULT_DPS) -> dict[str, object]:
    """Closed-form slopes at ``p = 1/2``."""
    with mpmath.workdps(dps):
        e = mpmath.e
        r = mpmath.sqrt(e)
        e32 = e * r
        return {
            "E_napkinless": (2 - r) ** 2,
            "E_frustrated": 6 * r - e - 7,
            "E_happy": 4 - 2 * r,
            "Var_napkinless": (3 - e) * (2 - r) ** 2,
            "Var_frustrated": 6 * e32 - e**2 - e - 38 * r + 46,
            "Covar": -(2 - r) * (e32 - 3 * e - 5 * r + 12),
        }


def asymptotic_slopes(params, dps: int = DEFAULT_DPS) -> Slopes:
    params = _params(params)
    if params.p * params.q == 0:
        raise ValueError("slopes need 0 < p < 1")
    with mpmath.workdps(dps):
        p = mpmath.mpf(params.p.numerator) / params.p.denominator
        q = 1 - p
        e = mpmath.e
        ep, eq = mpmath.exp(p), mpmath.exp(q)
        e_slope = (1 - p * eq) * (1 - q * ep) / (p * q)
        var_slope = (
            (1 - p * eq) * (1 - q * ep)
            * (1 - (p * p - p * q) * eq - (q * q - p * q) * ep - p * q * (e + 1))
            / (p * p * q * q)
        )
        bm2 = (p * q * e + (p * p + p * q - 1) * ep + (q * q + p * q - 1) * eq + 1) / (p * q)
        # the constant is +1; with -1 the estimate (n+1)b_-2 + b_-1 would be
        # off from n * e_slope by 2/(pq)
        bm1 = -(p * q * (e + ep + eq) + (1 + p) * (p * p + p * q - 1) * ep
                + (1 + q) * (q * q + p * q - 1) * eq + 1) / (p * q)
        expansion = principal_part(_expectation_cleared(p, q), 2, dps)
        slopes = Slopes(params.p, dps, e_slope, var_slope, expansion, bm2, bm1)
        if params.p == Fraction(1, 2):
            t = closed_slopes_half(dps)
            slopes.E_frustrated = t["E_frustrated"]
            slopes.E_happy = t["E_happy"]
            slopes.Var_frustrated = t["Var_frustrated"]
            slopes.Covar = t["Covar"]
            # Var_n = [z^n](C_xx + E) - E_n^2; the n^2 terms cancel
            sec = principal_part(_second_factorial_cleared_half, 3, dps)
            a3, a2, _ = sec.coefficients
            b2 = expansion.coefficients[0]
            slopes.Var_napkinless_from_poles = mpmath.mpf(3) / 2 * a3 + a2 + b2
            slopes.extra["n_squared_residual"] = a3 / 2 - b2**2
    return slopes

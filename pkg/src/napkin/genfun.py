"""Generating functions for napkinless/frustrated guests and their identity suite.

Every series here is a :class:`~napkin.series.ZSeries` whose ``z**n``
coefficient is the probability polynomial for tables of ``n`` guests
(``x`` marks a napkinless guest, ``y`` a frustrated one).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .model import Params
from .series import (
    X,
    Y,
    XYPoly,
    ZSeries,
    derivative,
    diff_x,
    exp_monomial,
    solve_ode_quadratic,
)

__all__ = [
    "GFSet",
    "IdentityCheck",
    "IdentityReport",
    "build_H",
    "build_L0",
    "build_everyone_served",
    "build_full",
    "closed_form_D",
    "closed_form_C_numerator",
    "verify_identities",
]

log = logging.getLogger(__name__)


def _params(params) -> Params:
    return params if isinstance(params, Params) else Params(params)


def build_H(params, order: int) -> ZSeries:
    """Single-block series ``p (exp(q y z) - 1) / (q y)``, expanded termwise."""
    params = _params(params)
    p, q = params.p, params.q
    coeffs = [XYPoly()]
    c = p  # p q^(n-1) / n!
    for n in range(1, order + 1):
        if n > 1:
            c = c * q / n
        coeffs.append(XYPoly.monomial(c, 0, n - 1))
    return ZSeries(coeffs, order)


def build_L0(params, order: int) -> ZSeries:
    """Everyone served, left end napkin taken: ``1/(1 - H) - 1``."""
    h = build_H(params, order)
    return (1 - h).reciprocal() - 1


def build_everyone_served(params, order: int) -> tuple[ZSeries, ZSeries, ZSeries]:
    """``(C0, S0, B0)``: the round-table, straight-table and both-ends series at ``x = 0``."""
    params = _params(params)
    p, q = params.p, params.q
    l0 = build_L0(params, order)
    r0 = build_L0(params.swapped(), order)
    c0 = (1 + l0 * (p + q * Y) + r0 * (p * Y + q)).shift()
    s0 = (l0 + 1) * (r0 + 1)
    b0 = l0 * r0
    return c0, s0, b0


def napkin_rhs(h: ZSeries, hbar: ZSeries, params: Params) -> ZSeries:
    """``1 + q(y-1)H + p(y-1)Hbar + (x-y) H Hbar``."""
    p, q = params.p, params.q
    return 1 + h * ((Y - 1) * q) + hbar * ((Y - 1) * p) + (h * hbar) * (X - Y)


@dataclass(frozen=True)
class GFSet:
    params: Params
    order: int
    H: ZSeries
    Hbar: ZSeries
    S: ZSeries
    N_: ZSeries
    L: ZSeries
    R: ZSeries
    B: ZSeries
    C: ZSeries

    def series(self) -> dict[str, ZSeries]:
        return {
            "H": self.H, "Hbar": self.Hbar, "S": self.S, "N": self.N_,
            "L": self.L, "R": self.R, "B": self.B, "C": self.C,
        }


def build_full(params, order: int, method: str = "reciprocal") -> GFSet:
    """Solve for the straight-table series from ``S' = rhs * S**2`` and derive the rest."""
    params = _params(params)
    h = build_H(params, order)
    hbar = build_H(params.swapped(), order)
    rhs = napkin_rhs(h, hbar, params)
    s = solve_ode_quadratic(rhs, 1, order, method=method)
    one_h = 1 - h
    one_hbar = 1 - hbar
    hs = s * h
    return GFSet(
        params=params,
        order=order,
        H=h,
        Hbar=hbar,
        S=s,
        N_=s * (one_h * one_hbar),
        L=hs * one_hbar,
        R=s * (one_h * hbar),
        B=hs * hbar,
        C=(s * rhs).shift(),
    )


def closed_form_D(params, order: int) -> ZSeries:
    """The common denominator of the closed forms for ``S`` and ``C``."""
    params = _params(params)
    p, q = params.p, params.q
    e_y = exp_monomial(1, 1, order)
    e_py = exp_monomial(p, 1, order)
    e_qy = exp_monomial(q, 1, order)
    z = ZSeries.z(order)
    poly = p * q * (Y * (Y - 1) ** 2 + X) + Y * Y - X
    return (
        e_y * ((Y - X) * (p * q))
        + e_py * (q * X - p * q * Y - q * q * Y * Y)
        + e_qy * (p * X - p * q * Y - p * p * Y * Y)
        + ZSeries.const(poly, order)
        - z * (X * Y * (p * q))
    )


def closed_form_C_numerator(params, order: int) -> ZSeries:
    params = _params(params)
    p, q = params.p, params.q
    inner = (
        exp_monomial(1, 1, order) * (X - Y)
        + exp_monomial(p, 1, order) * (q * Y * Y + p * Y - X)
        + exp_monomial(q, 1, order) * (p * Y * Y + q * Y - X)
        + X
    )
    return (inner * (Y * (p * q))).shift()


@dataclass
class IdentityCheck:
    name: str
    passed: bool
    first_failure: int | None = None
    informational: bool = False

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "informational": self.informational,
        }


@dataclass
class IdentityReport:
    p: Fraction
    order: int
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed and not c.informational]

    def __getitem__(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "p": f"{self.p.numerator}/{self.p.denominator}",
            "order": self.order,
            "all_passed": self.all_passed,
            "checks": [c.to_json() for c in self.checks],
        }


def _compare(name: str, lhs: ZSeries, rhs: ZSeries, upto: int | None = None,
             informational: bool = False) -> IdentityCheck:
    upto = min(lhs.order, rhs.order) if upto is None else upto
    for n in range(upto + 1):
        if lhs[n] != rhs[n]:
            return IdentityCheck(name, False, n, informational)
    return IdentityCheck(name, True, None, informational)


def verify_identities(g: GFSet, twin: GFSet | None = None) -> IdentityReport:
    """Check every identity tying the series together, coefficient by coefficient.

    ``twin`` is the same construction at ``p <-> q``; it is built when omitted.
    Any GFSet works here, including one assembled from brute-force counts.
    """
    params, order = g.params, g.order
    p, q = params.p, params.q
    if twin is None:
        twin = build_full(params.swapped(), order)
    z = ZSeries.z(order)
    h, hbar = g.H, g.Hbar
    S, N, L, R, B, C = g.S, g.N_, g.L, g.R, g.B, g.C
    rep = IdentityReport(p, order)
    add = rep.checks.append

    add(_compare("S = N + L + R + B", S, N + L + R + B))
    add(_compare("R(p) = L(q)", R, twin.L))
    add(_compare("C = z(N + (p+qy)L + (py+q)R + xB)", C,
                 z * (N + L * (p + q * Y) + R * (p * Y + q) + B * X)))
    add(_compare("L + B = H S", L + B, h * S))
    add(_compare("B = H S Hbar", B, h * S * hbar))
    add(_compare("N = S(1-H)(1-Hbar)", N, S * (1 - h) * (1 - hbar)))
    add(_compare("L = S H (1-Hbar)", L, S * h * (1 - hbar)))
    add(_compare("R = S (1-H) Hbar", R, S * (1 - h) * hbar))
    add(_compare("B = S H Hbar", B, S * h * hbar))
    add(_compare("C = zS(1 + q(y-1)H + p(y-1)Hbar + (x-y)H Hbar)", C,
                 z * S * napkin_rhs(h, hbar, params)))
    add(_compare("z S' = C S", S.euler(), C * S))

    D = closed_form_D(params, order)
    add(_compare("S D = pqy^3", S * D, ZSeries.const(Y**3 * (p * q), order)))
    add(_compare("C D = closed-form numerator", C * D, closed_form_C_numerator(params, order)))

    # everyone-served slice x = 0
    c0, s0, b0 = build_everyone_served(params, order)
    l0 = build_L0(params, order)
    r0 = build_L0(params.swapped(), order)
    add(_compare("C(0,y,z) = C0", C.subs(x=0), c0))
    add(_compare("S(0,y,z) = S0", S.subs(x=0), s0))
    add(_compare("B(0,y,z) = B0", B.subs(x=0), b0))
    add(_compare("L(0,y,z) = L0", L.subs(x=0), l0))
    add(_compare("N(0,y,z) = 1", N.subs(x=0), ZSeries.const(1, order)))
    if order >= 1:
        l0_rhs = (l0 + 1) * (p + (p + q * Y) * l0)
        add(_compare("L0' = (L0+1)(p+(p+qy)L0)", derivative(l0), l0_rhs.truncate(order - 1)))
    e_qy1 = exp_monomial(q, 1, order) - 1
    e_py1 = exp_monomial(p, 1, order) - 1
    dl = (q * Y) - e_qy1 * p
    dr = (p * Y) - e_py1 * q
    add(_compare("L0 (qy - p(e^{qyz}-1)) = p(e^{qyz}-1)", l0 * dl, e_qy1 * p))
    add(_compare("S0 closed form", s0 * (e_py1 * q - p * Y) * (e_qy1 * p - q * Y),
                 ZSeries.const(Y * Y * (p * q), order)))
    add(_compare("B0 closed form", b0 * dl * dr, e_qy1 * e_py1 * (p * q)))
    add(_compare("C0 closed form", c0 * dl * dr,
                 z * (dl * dr + e_qy1 * dr * (p * (p + q * Y)) + e_py1 * dl * (q * (p * Y + q)))))

    add(_compare("C(p) = C(q)", C, twin.C))
    add(_compare("S(p) = S(q)", S, twin.S))
    add(_compare("N(p) = N(q)", N, twin.N_))
    add(_compare("B(p) = B(q)", B, twin.B))

    geo = ZSeries.geometric(order)
    add(_compare("C(1,1,z) = sum z^n", C.subs(1, 1), geo - 1))

    # expected napkinless count generating function against z d/dz N(1,1,z)
    e_gf = diff_x(C.subs(y=1)).subs(x=1)
    edn = N.subs(1, 1).euler()
    half = p == Fraction(1, 2)
    add(_compare("E(z) = z d/dz N(1,1,z)", e_gf, edn, informational=not half))
    if half:
        two_minus = 2 - exp_monomial(Fraction(1, 2), 0, order)
        add(_compare("E(z) = z d/dz[(2-e^{z/2})^2/(1-z)]", e_gf,
                     (two_minus * two_minus * geo).euler()))

    for c in rep.checks:
        log.debug("%s: %s", c.name, "ok" if c.passed else f"fails at z^{c.first_failure}")
    return rep

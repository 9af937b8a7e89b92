"""Truncated power series in ``z`` over polynomials in ``x`` and ``y``.

Coefficients are exact (``fractions.Fraction``).  A :class:`ZSeries` of
order ``N`` carries the ordinary coefficients of ``z**0 .. z**N``; the
exponential normalisation ``n! [z^n]`` is available through
:meth:`ZSeries.egf`.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "XYPoly",
    "ZSeries",
    "OrderMismatch",
    "exp_monomial",
    "integrate",
    "derivative",
    "solve_ode_quadratic",
    "diff_x",
    "diff_y",
    "eval_x1",
    "eval_y1",
]


class OrderMismatch(ValueError):
    pass


class XYPoly:
    """Polynomial in ``x`` and ``y``: a map ``(xdeg, ydeg) -> Fraction``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError("negative degree")
                c = Fraction(c)
                if c:
                    clean[(i, j)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "XYPoly":
        # trusted constructor: no zero coefficients, Fraction values
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, c) -> "XYPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c, xdeg: int = 0, ydeg: int = 0) -> "XYPoly":
        return cls({(xdeg, ydeg): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, XYPoly):
            if isinstance(other, (int, Fraction)):
                other = XYPoly.const(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"XYPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "".join(
                s if d == 1 else f"{s}^{d}" for s, d in (("x", i), ("y", j)) if d
            )
            out.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(out)

    def __add__(self, other):
        if isinstance(other, ZSeries):
            return NotImplemented
        other = _as_poly(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return XYPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return XYPoly._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, ZSeries):
            return NotImplemented
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        if isinstance(other, ZSeries):
            return NotImplemented
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return XYPoly()
            return XYPoly._raw({k: c * other for k, c in self.terms.items()})
        if isinstance(other, ZSeries):
            return NotImplemented
        acc: dict = {}
        _mul_into(acc, self.terms, _as_poly(other).terms)
        return XYPoly._raw(_prune(acc))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = XYPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def coefficient(self, xdeg: int, ydeg: int) -> Fraction:
        return self.terms.get((xdeg, ydeg), Fraction(0))

    def constant(self) -> Fraction:
        return self.coefficient(0, 0)

    def diff_x(self) -> "XYPoly":
        return XYPoly._raw({(i - 1, j): c * i for (i, j), c in self.terms.items() if i})

    def diff_y(self) -> "XYPoly":
        return XYPoly._raw({(i, j - 1): c * j for (i, j), c in self.terms.items() if j})

    def subs(self, x=None, y=None) -> "XYPoly":
        """Substitute exact values for ``x`` and/or ``y`` (None keeps the symbol)."""
        acc: dict = {}
        for (i, j), c in self.terms.items():
            if x is not None:
                c = c * Fraction(x) ** i
                i = 0
            if y is not None:
                c = c * Fraction(y) ** j
                j = 0
            acc[(i, j)] = acc.get((i, j), 0) + c
        return XYPoly._raw(_prune(acc))

    def __call__(self, x, y) -> Fraction:
        return self.subs(x, y).constant()

    def to_json(self) -> list[dict]:
        return [
            {"xdeg": i, "ydeg": j, "num": c.numerator, "den": c.denominator}
            for (i, j), c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, terms: Iterable[dict]) -> "XYPoly":
        return cls({(t["xdeg"], t["ydeg"]): Fraction(t["num"], t["den"]) for t in terms})


X = XYPoly.monomial(1, 1, 0)
Y = XYPoly.monomial(1, 0, 1)
ONE = XYPoly.const(1)


def _as_poly(v) -> XYPoly:
    if isinstance(v, XYPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return XYPoly.const(v)
    raise TypeError(f"cannot use {type(v).__name__} as a polynomial")


def _mul_into(acc: dict, a: dict, b: dict) -> None:
    get = acc.get
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            acc[k] = get(k, 0) + c1 * c2


def _prune(acc: dict) -> dict:
    return {k: c for k, c in acc.items() if c}


class ZSeries:
    """Power series in ``z`` truncated after ``z**order``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [_as_poly(c) for c in coeffs]
        if order is not None:
            cs = cs[: order + 1] + [XYPoly()] * (order + 1 - len(cs))
        if not cs:
            raise ValueError("a series needs order >= 0")
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int) -> "ZSeries":
        return cls([], order)

    @classmethod
    def const(cls, c, order: int) -> "ZSeries":
        return cls([_as_poly(c)], order)

    @classmethod
    def z(cls, order: int) -> "ZSeries":
        return cls([0, 1], order)

    @classmethod
    def geometric(cls, order: int, ratio=1) -> "ZSeries":
        """``sum (ratio z)^n``."""
        return cls([Fraction(ratio) ** n for n in range(order + 1)])

    def __getitem__(self, n: int) -> XYPoly:
        if n > self.order:
            raise IndexError(f"z^{n} lies beyond truncation order {self.order}")
        return self.coeffs[n] if n >= 0 else XYPoly()

    def egf(self, n: int) -> XYPoly:
        """``n! [z^n]``: the coefficient relative to ``z^n / n!``."""
        return self[n] * _factorial(n)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*z^{n}" for n, c in enumerate(self.coeffs) if c)
        return f"ZSeries[{self.order}]({body or '0'})"

    def _check(self, other) -> "ZSeries":
        if not isinstance(other, ZSeries):
            return ZSeries.const(other, self.order)
        if other.order != self.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return ZSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return ZSeries([-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        return ZSeries([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, XYPoly)):
            return ZSeries([c * other for c in self.coeffs])
        other = self._check(other)
        a = [c.terms for c in self.coeffs]
        b = [c.terms for c in other.coeffs]
        out = []
        for n in range(len(a)):
            acc: dict = {}
            for k in range(n + 1):
                if a[k] and b[n - k]:
                    _mul_into(acc, a[k], b[n - k])
            out.append(XYPoly._raw(_prune(acc)))
        return ZSeries(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ZSeries.const(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def shift(self) -> "ZSeries":
        """Multiply by ``z`` (the top coefficient falls off)."""
        return ZSeries([XYPoly()] + list(self.coeffs[:-1]))

    def truncate(self, order: int) -> "ZSeries":
        if order > self.order:
            raise OrderMismatch("cannot raise the truncation order")
        return ZSeries(self.coeffs[: order + 1])

    def map(self, fn) -> "ZSeries":
        return ZSeries([fn(c) for c in self.coeffs])

    def subs(self, x=None, y=None) -> "ZSeries":
        return self.map(lambda c: c.subs(x, y))

    def euler(self) -> "ZSeries":
        """``z d/dz``; keeps the truncation order."""
        return ZSeries([c * n for n, c in enumerate(self.coeffs)])

    def is_unit(self) -> bool:
        c0 = self.coeffs[0]
        return bool(c0) and list(c0.terms) == [(0, 0)]

    def reciprocal(self) -> "ZSeries":
        """``1 / self`` when the constant term is a nonzero number."""
        if not self.is_unit():
            raise ZeroDivisionError("constant term is not an invertible scalar")
        inv0 = 1 / self.coeffs[0].constant()
        a = [c.terms for c in self.coeffs]
        out = [{(0, 0): inv0}]
        for n in range(1, len(a)):
            acc: dict = {}
            for k in range(1, n + 1):
                if a[k] and out[n - k]:
                    _mul_into(acc, a[k], out[n - k])
            out.append({key: -c * inv0 for key, c in acc.items() if c})
        return ZSeries([XYPoly._raw(_prune(t)) for t in out])

    def first_nonzero(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def is_zero(self) -> bool:
        return self.first_nonzero() is None

    def to_json(self) -> list[dict]:
        return [{"n": n, "terms": c.to_json()} for n, c in enumerate(self.coeffs)]

    def dumps(self, **kw) -> str:
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, data) -> "ZSeries":
        if isinstance(data, str):
            data = json.loads(data)
        by_n = {row["n"]: XYPoly.from_json(row["terms"]) for row in data}
        order = max(by_n)
        return cls([by_n.get(n, XYPoly()) for n in range(order + 1)])


_FACT = [1]


def _factorial(n: int) -> int:
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


def exp_monomial(c, ydeg: int, order: int) -> ZSeries:
    """``exp(c z)`` (``ydeg=0``) or ``exp(c y z)`` (``ydeg=1``) up to ``z**order``."""
    if ydeg not in (0, 1):
        raise ValueError("ydeg must be 0 or 1")
    c = Fraction(c)
    out = []
    term = Fraction(1)
    for n in range(order + 1):
        if n:
            term = term * c / n
        out.append(XYPoly.monomial(term, 0, n * ydeg))
    return ZSeries(out)


def integrate(a: ZSeries) -> ZSeries:
    """Antiderivative with zero constant term, same order."""
    return ZSeries([XYPoly()] + [c * Fraction(1, n + 1) for n, c in enumerate(a.coeffs[:-1])])


def derivative(a: ZSeries) -> ZSeries:
    """``d/dz``; the result has order ``a.order - 1`` (order 0 maps to the zero series)."""
    if a.order == 0:
        return ZSeries.zero(0)
    return ZSeries([c * n for n, c in enumerate(a.coeffs)][1:])


def solve_ode_quadratic(rhs_coeff: ZSeries, s0=1, order: int | None = None,
                        method: str = "reciprocal") -> ZSeries:
    """The series ``S`` with ``S(0) = s0`` and ``S' = rhs_coeff * S**2``.

    ``method="direct"`` runs the recursion
    ``(n+1) S[n+1] = [z^n](rhs_coeff * S**2)``.  ``method="reciprocal"``
    uses ``(1/S)' = -rhs_coeff``, i.e. ``S = 1 / (1/s0 - integral(rhs_coeff))``,
    which needs ``s0`` to be an invertible scalar and costs one sparse
    product instead of a dense square.
    """
    if order is None:
        order = rhs_coeff.order + 1
    if order > rhs_coeff.order + 1:
        raise OrderMismatch("rhs_coeff is too short for the requested order")
    s0 = _as_poly(s0)
    r = ZSeries(rhs_coeff.coeffs, order)
    if method == "reciprocal":
        if list(s0.terms) != [(0, 0)]:
            raise ValueError("reciprocal method needs a nonzero scalar s0")
        return (ZSeries.const(1 / s0.constant(), order) - integrate(r)).reciprocal()
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    s = [s0.terms]
    sq = []  # coefficients of S**2
    rt = [c.terms for c in r.coeffs]
    for n in range(order):
        acc: dict = {}
        for k in range(n + 1):
            if s[k] and s[n - k]:
                _mul_into(acc, s[k], s[n - k])
        sq.append(_prune(acc))
        acc = {}
        for k in range(n + 1):
            if rt[k] and sq[n - k]:
                _mul_into(acc, rt[k], sq[n - k])
        inv = Fraction(1, n + 1)
        s.append({key: c * inv for key, c in _prune(acc).items()})
    return ZSeries([XYPoly._raw(t) for t in s])


def diff_x(a: ZSeries) -> ZSeries:
    return a.map(XYPoly.diff_x)


def diff_y(a: ZSeries) -> ZSeries:
    return a.map(XYPoly.diff_y)


def eval_x1(a: ZSeries) -> ZSeries:
    return a.subs(x=1)


def eval_y1(a: ZSeries) -> ZSeries:
    return a.subs(y=1)

"""Exhaustive enumeration over all ``2**n * n!`` signed permutations.

Deliberately naive: every signed permutation is replayed seat by seat and
the outcomes are tallied.  Tallies are keyed by integer exponents and
weighted by ``p``/``q`` afterwards, so one enumeration serves every ``p``.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .model import Params, play
from .series import XYPoly, ZSeries

__all__ = [
    "JointDistribution",
    "EnumerationTooLarge",
    "MAX_N",
    "enumerate_table",
    "enumerate_napkinless_seat1",
    "class_count",
    "gfset_from_oracle",
]

MAX_N = 8


class EnumerationTooLarge(ValueError):
    pass


def _guard(n: int, allow_large: bool) -> None:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_N and not allow_large:
        raise EnumerationTooLarge(
            f"n={n} means {2**n * math.factorial(n)} cases; pass allow_large=True to insist"
        )


def signed_permutations(n: int):
    """All signed permutations of ``1..n``: lexicographic, signs as bitmasks."""
    for perm in itertools.permutations(range(1, n + 1)):
        for mask in range(1 << n):
            yield tuple(-v if mask >> i & 1 else v for i, v in enumerate(perm))


@lru_cache(maxsize=None)
def _tally(n: int, circular: bool) -> Counter:
    """Counter over ``(neg_count, o, m, end_class, seat1_napkinless)``."""
    counts: Counter = Counter()
    for entries in signed_permutations(n):
        codes, taken = play(entries, circular)
        neg = sum(1 for e in entries if e < 0)
        end = None if circular else "NLRB"[taken[0] + 2 * taken[-1]]
        counts[(neg, codes.count(2), codes.count(1), end, bool(codes) and codes[0] == 2)] += 1
    return counts


def _pq_weights(n: int, params: Params) -> list[Fraction]:
    denom = math.factorial(n)
    return [params.p**k * params.q ** (n - k) / denom for k in range(n + 1)]


@dataclass
class JointDistribution:
    """``probs[(i, j)]``: probability of ``i`` napkinless and ``j`` frustrated guests."""

    n: int
    p: Fraction
    table: str
    probs: dict[tuple[int, int], Fraction]
    by_class: dict[str, dict[tuple[int, int], Fraction]] = field(default_factory=dict)

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))

    def poly(self, end_class: str | None = None) -> XYPoly:
        src = self.probs if end_class is None else self.by_class.get(end_class, {})
        return XYPoly(src)

    def marginal_napkinless(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for (i, _), pr in self.probs.items():
            out[i] = out.get(i, Fraction(0)) + pr
        return out

    def mean(self, which: str = "o") -> Fraction:
        k = 0 if which == "o" else 1
        return sum((key[k] * pr for key, pr in self.probs.items()), Fraction(0))

    def rows(self):
        for (i, j) in sorted(self.probs):
            yield self.n, i, j, self.probs[(i, j)]

    def to_json(self, with_float: bool = False) -> dict:
        def row(i, j, pr):
            d = {"i": i, "j": j, "prob": f"{pr.numerator}/{pr.denominator}",
                 "num": pr.numerator, "den": pr.denominator}
            if with_float:
                d["float"] = float(pr)
            return d

        out = {
            "n": self.n,
            "p": f"{self.p.numerator}/{self.p.denominator}",
            "table": self.table,
            "rows": [row(i, j, pr) for _, i, j, pr in self.rows()],
        }
        if self.by_class:
            out["by_class"] = {
                c: [row(i, j, pr) for (i, j), pr in sorted(d.items())]
                for c, d in sorted(self.by_class.items())
            }
        return out

    def to_csv(self, with_float: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "i", "j", "num", "den"] + (["float"] if with_float else []))
        for n, i, j, pr in self.rows():
            w.writerow([n, i, j, pr.numerator, pr.denominator] + ([float(pr)] if with_float else []))
        return buf.getvalue()


def enumerate_table(n: int, params=None, table: str = "circular",
                    allow_large: bool = False) -> JointDistribution:
    params = params if isinstance(params, Params) else Params(params if params is not None else "1/2")
    _guard(n, allow_large)
    circular = table in ("circular", "round")
    if not circular and table not in ("linear", "straight"):
        raise ValueError(f"unknown table kind {table!r}")
    if circular and n < 1:
        raise ValueError("a round table needs at least one guest")
    w = _pq_weights(n, params)
    probs: dict = {}
    by_class: dict = {}
    for (neg, o, m, end, _), cnt in _tally(n, circular).items():
        pr = w[neg] * cnt
        if not pr:
            continue
        probs[(o, m)] = probs.get((o, m), 0) + pr
        if end is not None:
            d = by_class.setdefault(end, {})
            d[(o, m)] = d.get((o, m), 0) + pr
    return JointDistribution(n, params.p, "circular" if circular else "linear", probs, by_class)


@dataclass(frozen=True)
class Seat1Napkinless:
    probability: Fraction
    count: int


def enumerate_napkinless_seat1(n: int, params=None, allow_large: bool = False) -> Seat1Napkinless:
    """Probability (and raw count) that the guest in seat 1 of a round table
    ends up without a napkin."""
    params = params if isinstance(params, Params) else Params(params if params is not None else "1/2")
    _guard(n, allow_large)
    if n < 1:
        raise ValueError("a round table needs at least one guest")
    w = _pq_weights(n, params)
    prob = Fraction(0)
    count = 0
    for (neg, _, _, _, seat1), cnt in _tally(n, True).items():
        if seat1:
            prob += w[neg] * cnt
            count += cnt
    return Seat1Napkinless(prob, count)


def class_count(n: int, end_class: str, allow_large: bool = False) -> int:
    """Number of signed permutations of a straight table in the given end class."""
    _guard(n, allow_large)
    return sum(cnt for (_, _, _, end, _), cnt in _tally(n, False).items() if end == end_class)


def gfset_from_oracle(params, order: int):
    """A :class:`~napkin.genfun.GFSet` whose table series come from enumeration."""
    from .genfun import GFSet, build_H

    params = params if isinstance(params, Params) else Params(params)
    _guard(order, False)
    cols: dict[str, list[XYPoly]] = {k: [] for k in "SNLRBC"}
    for n in range(order + 1):
        lin = enumerate_table(n, params, "linear")
        cols["S"].append(lin.poly())
        for c in "NLRB":
            cols[c].append(lin.poly(c))
        cols["C"].append(enumerate_table(n, params, "circular").poly() if n else XYPoly())
    s = {k: ZSeries(v) for k, v in cols.items()}
    return GFSet(
        params=params, order=order,
        H=build_H(params, order), Hbar=build_H(params.swapped(), order),
        S=s["S"], N_=s["N"], L=s["L"], R=s["R"], B=s["B"], C=s["C"],
    )

"""Signed permutations and the seating process at round and straight tables.

A signed permutation lists, seat by seat, the arrival rank of the guest in
that seat; a negative entry means the guest prefers the napkin on the left.
Napkin ``k`` lies between seat ``k`` and seat ``k + 1``, so seat ``i`` has
napkin ``i - 1`` on its left and napkin ``i`` on its right.  Round tables
take napkin indices modulo ``n``; straight tables carry napkins ``0..n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Params",
    "SignedPermutation",
    "Status",
    "TableOutcome",
    "Weight",
    "replay_circular",
    "replay_linear",
    "weight_of",
    "mirror",
    "rotate",
]


def parse_rational(value) -> Fraction:
    """Parse ``"a/b"``, an int, or a Fraction exactly.  Floats are refused."""
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string like '69/100'")
    if isinstance(value, str):
        value = value.strip()
    return Fraction(value)


@dataclass(frozen=True)
class Params:
    """Probability ``p`` of preferring the left napkin (``q = 1 - p``)."""

    p: Fraction

    def __init__(self, p=Fraction(1, 2)):
        p = parse_rational(p)
        if not 0 <= p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    def swapped(self) -> "Params":
        return Params(self.q)

    def __str__(self) -> str:
        return str(self.p)


@dataclass(frozen=True)
class SignedPermutation:
    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int] = ()):
        entries = tuple(int(e) for e in entries)
        if sorted(abs(e) for e in entries) != list(range(1, len(entries) + 1)) or 0 in entries:
            raise ValueError(f"not a signed permutation: {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text: str) -> "SignedPermutation":
        text = text.strip().strip("()")
        if not text:
            return cls(())
        return cls(int(tok) for tok in text.split(","))

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def neg_count(self) -> int:
        return sum(1 for e in self.entries if e < 0)

    @property
    def pos_count(self) -> int:
        return sum(1 for e in self.entries if e > 0)


class Status(enum.Enum):
    HAPPY = "happy"
    FRUSTRATED = "frustrated"
    NAPKINLESS = "napkinless"


@dataclass(frozen=True)
class TableOutcome:
    statuses: tuple[Status, ...]
    o: int
    m: int
    neg_count: int
    pos_count: int
    end_class: str | None = None  # "N", "L", "R" or "B"; straight tables only
    napkins_left: int = 0

    @property
    def n(self) -> int:
        return len(self.statuses)

    @property
    def happy(self) -> int:
        return self.n - self.o - self.m


@dataclass(frozen=True)
class Weight:
    """The monomial ``coefficient * x**xdeg * y**ydeg``."""

    coefficient: Fraction
    xdeg: int
    ydeg: int

    def to_poly(self):
        from .series import XYPoly

        return XYPoly({(self.xdeg, self.ydeg): self.coefficient})

    def __str__(self) -> str:
        parts = [str(self.coefficient)]
        for sym, deg in (("x", self.xdeg), ("y", self.ydeg)):
            if deg == 1:
                parts.append(sym)
            elif deg:
                parts.append(f"{sym}^{deg}")
        return "*".join(parts)


def play(entries: Sequence[int], circular: bool) -> tuple[list[int], list[bool]]:
    """Replay arrivals; return per-seat codes (0 happy, 1 frustrated, 2 napkinless)
    and the taken-flags of every napkin."""
    n = len(entries)
    if circular and n == 0:
        raise ValueError("a round table needs at least one guest")
    napkins = n if circular else n + 1
    taken = [False] * napkins
    seat_of = [0] * n
    for seat, e in enumerate(entries):
        seat_of[abs(e) - 1] = seat
    codes = [0] * n
    for seat in seat_of:
        left = seat
        right = seat + 1
        if circular and right == n:
            right = 0
        if entries[seat] < 0:
            want, other = left, right
        else:
            want, other = right, left
        if not taken[want]:
            taken[want] = True
        elif not taken[other]:
            taken[other] = True
            codes[seat] = 1
        else:
            codes[seat] = 2
    return codes, taken


_STATUS = (Status.HAPPY, Status.FRUSTRATED, Status.NAPKINLESS)


def _coerce(pi) -> SignedPermutation:
    if isinstance(pi, SignedPermutation):
        return pi
    if isinstance(pi, str):
        return SignedPermutation.parse(pi)
    return SignedPermutation(pi)


def _outcome(pi: SignedPermutation, circular: bool) -> TableOutcome:
    codes, taken = play(pi.entries, circular)
    end_class = None
    if not circular:
        end_class = "NLRB"[taken[0] + 2 * taken[-1]]
    return TableOutcome(
        statuses=tuple(_STATUS[c] for c in codes),
        o=codes.count(2),
        m=codes.count(1),
        neg_count=pi.neg_count,
        pos_count=pi.pos_count,
        end_class=end_class,
        napkins_left=taken.count(False),
    )


def replay_circular(pi) -> TableOutcome:
    pi = _coerce(pi)
    if len(pi) == 0:
        raise ValueError("a round table needs at least one guest")
    return _outcome(pi, circular=True)


def replay_linear(pi) -> TableOutcome:
    return _outcome(_coerce(pi), circular=False)


def weight_of(pi, params: Params, table: str = "circular") -> Weight:
    if table in ("circular", "round"):
        out = replay_circular(pi)
    elif table in ("linear", "straight"):
        out = replay_linear(pi)
    else:
        raise ValueError(f"unknown table kind {table!r}")
    coeff = params.p**out.neg_count * params.q**out.pos_count
    return Weight(Fraction(coeff), out.o, out.m)


def mirror(pi) -> SignedPermutation:
    """Reverse the seats and flip every preference."""
    return SignedPermutation(-e for e in reversed(_coerce(pi).entries))


def rotate(pi, k: int = 1) -> SignedPermutation:
    """Cyclically relabel seats: seat ``i`` becomes seat ``i + k``."""
    e = _coerce(pi).entries
    if not e:
        return SignedPermutation(())
    k %= len(e)
    return SignedPermutation(e[-k:] + e[:-k] if k else e)

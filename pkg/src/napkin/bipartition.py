"""Ordered and cyclic bipartitions and their bijections with signed permutations.

A bipartition is a sequence of blocks, each *underlined* or not.  A plain
block ``{6,4}`` is a run of guests who all end up with the napkin on their
left; an underlined block ``u{1,3}`` is a run taking napkins on the right.
Plain blocks print in decreasing order, underlined blocks in increasing
order, which is also the seat order of their guests.

Text format: ``u{9} u{1,3} u{2} {6,4} {7}``; a distinguished (or marked)
element is wrapped in parentheses, ``u{5,6,(7)} u{1,3} {4,2}``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .model import SignedPermutation, _coerce

__all__ = [
    "Block",
    "OrderedBipartition",
    "CyclicBipartition",
    "InvalidBipartition",
    "encode_linear",
    "decode_linear",
    "is_valid_image",
    "is_valid_cyclic_image",
    "stats_from_bipartition",
    "cyclic_stats",
    "end_class_of",
    "encode_circular",
    "decode_circular",
    "split_marked",
    "join_pair",
    "standardize",
    "napkinless_rotation",
    "napkinless_rotation_inverse",
    "all_ordered_bipartitions",
    "parse",
    "parse_cyclic",
]


class InvalidBipartition(ValueError):
    pass


@dataclass(frozen=True)
class Block:
    elements: frozenset[int]
    underlined: bool = False

    def __init__(self, elements: Iterable[int], underlined: bool = False):
        elements = frozenset(elements)
        if not elements:
            raise InvalidBipartition("blocks are nonempty")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "underlined", bool(underlined))

    @property
    def ordered(self) -> tuple[int, ...]:
        """Elements in seat order: increasing if underlined, else decreasing."""
        return tuple(sorted(self.elements, reverse=not self.underlined))

    @property
    def least(self) -> int:
        return min(self.elements)

    @property
    def greatest(self) -> int:
        return max(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def signed(self) -> list[int]:
        # plain: least negative, rest positive; underlined: the reverse
        lo = self.least
        s = 1 if self.underlined else -1
        return [s * e if e == lo else -s * e for e in self.ordered]

    def render(self, mark: int | None = None) -> str:
        body = ",".join(f"({e})" if e == mark else str(e) for e in self.ordered)
        return ("u" if self.underlined else "") + "{" + body + "}"

    def relabel(self, mapping) -> "Block":
        return Block((mapping[e] for e in self.elements), self.underlined)


def _check_cover(blocks: Sequence[Block]) -> int:
    seen: set[int] = set()
    total = 0
    for b in blocks:
        total += len(b)
        seen |= b.elements
    if len(seen) != total:
        raise InvalidBipartition("blocks overlap")
    return total


@dataclass(frozen=True)
class OrderedBipartition:
    """Blocks in order; ``marked`` optionally distinguishes one element."""

    blocks: tuple[Block, ...]
    marked: int | None = None

    def __init__(self, blocks: Iterable[Block] = (), marked: int | None = None):
        blocks = tuple(blocks)
        _check_cover(blocks)
        if marked is not None and not any(marked in b.elements for b in blocks):
            raise InvalidBipartition(f"marked element {marked} is not present")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "marked", marked)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def ground(self) -> frozenset[int]:
        return frozenset().union(*(b.elements for b in self.blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return " ".join(b.render(self.marked) for b in self.blocks)

    def unmarked(self) -> "OrderedBipartition":
        return OrderedBipartition(self.blocks)

    def with_mark(self, marked: int) -> "OrderedBipartition":
        return OrderedBipartition(self.blocks, marked)

    def word(self) -> list[int]:
        return [e for b in self.blocks for e in b.signed()]


@dataclass(frozen=True)
class CyclicBipartition:
    """Blocks up to rotation, with a distinguished element (the guest in seat 1).

    Stored in canonical rotation: the distinguished block comes last when
    plain and first when underlined.
    """

    blocks: tuple[Block, ...]
    distinguished: int

    def __init__(self, blocks: Iterable[Block], distinguished: int):
        blocks = tuple(blocks)
        _check_cover(blocks)
        for k, b in enumerate(blocks):
            if distinguished in b.elements:
                break
        else:
            raise InvalidBipartition(f"distinguished element {distinguished} is not present")
        if b.underlined:
            blocks = blocks[k:] + blocks[:k]
        else:
            blocks = blocks[k + 1:] + blocks[: k + 1]
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "distinguished", distinguished)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def ground(self) -> frozenset[int]:
        return frozenset().union(*(b.elements for b in self.blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return " ".join(b.render(self.distinguished) for b in self.blocks)

    def rotations(self) -> Iterator[tuple[Block, ...]]:
        bs = self.blocks
        for k in range(len(bs)):
            yield bs[k:] + bs[:k]


_BLOCK_RE = re.compile(r"(u?)\{([^{}]*)\}")


def parse(text: str):
    """Parse the text format into an :class:`OrderedBipartition`; a
    parenthesised element becomes its mark."""
    text = text.strip()
    blocks = []
    mark = None
    pos = 0
    for m in _BLOCK_RE.finditer(text):
        if text[pos:m.start()].strip():
            raise InvalidBipartition(f"unexpected text {text[pos:m.start()]!r}")
        pos = m.end()
        elems = []
        for tok in m.group(2).split(","):
            tok = tok.strip()
            if tok.startswith("(") and tok.endswith(")"):
                tok = tok[1:-1].strip()
                if mark is not None:
                    raise InvalidBipartition("more than one distinguished element")
                mark = int(tok)
            elems.append(int(tok))
        if len(set(elems)) != len(elems):
            raise InvalidBipartition("repeated element in block")
        block = Block(elems, bool(m.group(1)))
        if list(block.ordered) != elems:
            raise InvalidBipartition(f"block {m.group(0)} is not in canonical order")
        blocks.append(block)
    if text[pos:].strip():
        raise InvalidBipartition(f"unexpected text {text[pos:]!r}")
    return OrderedBipartition(blocks, mark)


def parse_cyclic(text: str) -> CyclicBipartition:
    alpha = parse(text)
    if alpha.marked is None:
        raise InvalidBipartition("a cyclic bipartition needs a distinguished element")
    c = CyclicBipartition(alpha.blocks, alpha.marked)
    if c.blocks != alpha.blocks:
        raise InvalidBipartition("cyclic bipartition is not in canonical rotation")
    return c


def _runs(entries: Sequence[int], cyclic: bool) -> list[tuple[int, list[int], bool]]:
    """Cut seats into runs following the least-unassigned-element procedure.

    Returns ``(start_seat, seats, underlined)`` per block, sorted by start seat.
    """
    n = len(entries)
    seat_of = [0] * n
    for i, e in enumerate(entries):
        seat_of[abs(e) - 1] = i
    assigned = [False] * n
    runs = []
    for v in range(1, n + 1):
        i = seat_of[v - 1]
        if assigned[i]:
            continue
        seats = [i]
        if entries[i] > 0:
            # underlined: extend right over increasing negative entries
            prev, j = i, i + 1
            while True:
                if cyclic:
                    j %= n
                elif j >= n:
                    break
                if assigned[j] or entries[j] > 0 or abs(entries[j]) < abs(entries[prev]):
                    break
                seats.append(j)
                prev, j = j, j + 1
            start = i
            underlined = True
        else:
            # plain: extend left over increasing positive entries
            nxt, j = i, i - 1
            while True:
                if cyclic:
                    j %= n
                elif j < 0:
                    break
                if assigned[j] or entries[j] < 0 or abs(entries[j]) < abs(entries[nxt]):
                    break
                seats.append(j)
                nxt, j = j, j - 1
            seats.reverse()
            start = seats[0]
            underlined = False
        for s in seats:
            assigned[s] = True
        runs.append((start, seats, underlined))
    runs.sort(key=lambda r: r[0])
    return runs


def encode_linear(pi) -> OrderedBipartition:
    pi = _coerce(pi)
    e = pi.entries
    return OrderedBipartition(
        Block((abs(e[s]) for s in seats), u) for _, seats, u in _runs(e, cyclic=False)
    )


def decode_linear(alpha: OrderedBipartition) -> SignedPermutation:
    if alpha.ground != frozenset(range(1, alpha.size + 1)):
        raise InvalidBipartition("ground set must be {1..n}")
    pi = SignedPermutation(alpha.word())
    if encode_linear(pi) != alpha.unmarked():
        raise InvalidBipartition(f"{alpha} is not the image of any signed permutation")
    return pi


def _forbidden_pair(u: Block, v: Block) -> bool:
    """True when plain block ``v`` may not follow underlined block ``u``."""
    if not u.underlined or v.underlined:
        return False
    if len(v) == 1 and u.greatest < v.least:
        return True
    if len(u) == 1 and v.greatest < u.least:
        return True
    return False


def is_valid_image(alpha: OrderedBipartition) -> bool:
    """Pattern test for the image of :func:`encode_linear`.

    Forbidden: an underlined block ending in ``a`` followed by a plain
    singleton ``{b}``, or an underlined singleton ``{b}`` followed by a plain
    block starting with ``a``, whenever ``a < b``.
    """
    bs = alpha.blocks
    return not any(_forbidden_pair(bs[k], bs[k + 1]) for k in range(len(bs) - 1))


def is_valid_cyclic_image(c: CyclicBipartition) -> bool:
    bs = c.blocks
    k = len(bs)
    if k == 1:
        return True
    return not any(_forbidden_pair(bs[i], bs[(i + 1) % k]) for i in range(k))


def _ud_adjacencies(blocks: Sequence[Block], cyclic: bool) -> int:
    k = len(blocks)
    pairs = range(k if cyclic and k > 1 else k - 1)
    return sum(
        1 for i in pairs if blocks[i].underlined and not blocks[(i + 1) % k].underlined
    )


def _stats(blocks: Sequence[Block], cyclic: bool) -> tuple[int, int, int, int]:
    n = sum(len(b) for b in blocks)
    o = _ud_adjacencies(blocks, cyclic)
    m = n - len(blocks) - o
    under = [b for b in blocks if b.underlined]
    plain = [b for b in blocks if not b.underlined]
    size_u = sum(len(b) for b in under)
    size_p = n - size_u
    neg = size_u - len(under) + len(plain)
    pos = size_p - len(plain) + len(under)
    return o, m, neg, pos


def stats_from_bipartition(alpha: OrderedBipartition) -> tuple[int, int, int, int]:
    """``(o, m, neg_count, pos_count)`` of the straight table encoded by ``alpha``."""
    return _stats(alpha.blocks, cyclic=False)


def cyclic_stats(c: CyclicBipartition) -> tuple[int, int, int, int]:
    """``(o, m, neg_count, pos_count)`` of the round table encoded by ``c``."""
    return _stats(c.blocks, cyclic=True)


def end_class_of(alpha: OrderedBipartition) -> str:
    """Which end napkins get taken: leftmost plain block takes the left end,
    rightmost underlined block takes the right end."""
    if not alpha.blocks:
        return "N"
    left = not alpha.blocks[0].underlined
    right = alpha.blocks[-1].underlined
    return "NLRB"[left + 2 * right]


def encode_circular(pi) -> CyclicBipartition:
    pi = _coerce(pi)
    e = pi.entries
    if not e:
        raise ValueError("a round table needs at least one guest")
    blocks = [Block((abs(e[s]) for s in seats), u) for _, seats, u in _runs(e, cyclic=True)]
    return CyclicBipartition(blocks, abs(e[0]))


def decode_circular(c: CyclicBipartition) -> SignedPermutation:
    if c.ground != frozenset(range(1, c.size + 1)):
        raise InvalidBipartition("ground set must be {1..n}")
    word = [e for b in c.blocks for e in b.signed()]
    k = next(i for i, e in enumerate(word) if abs(e) == c.distinguished)
    pi = SignedPermutation(word[k:] + word[:k])
    if encode_circular(pi) != c:
        raise InvalidBipartition(f"{c} is not the image of any signed permutation")
    return pi


def standardize(blocks: Sequence[Block], mark: int | None = None):
    """Relabel to ``1..k`` preserving order; returns ``(blocks, mark, labels)``
    where ``labels`` lists the original elements in increasing order."""
    labels = sorted(frozenset().union(*(b.elements for b in blocks))) if blocks else []
    rank = {v: i + 1 for i, v in enumerate(labels)}
    new = tuple(b.relabel(rank) for b in blocks)
    return new, (rank[mark] if mark is not None else None), labels


def split_marked(alpha: OrderedBipartition, marked: int | None = None):
    """Cut a marked straight table into ``(round table, straight table)``.

    The cut falls just after the marked block when it is plain and just
    before it when it is underlined.  Labels are kept as they are.
    """
    if marked is None:
        marked = alpha.marked
    if marked is None:
        raise ValueError("no marked element")
    bs = alpha.blocks
    k = next((i for i, b in enumerate(bs) if marked in b.elements), None)
    if k is None:
        raise InvalidBipartition(f"{marked} is not in the bipartition")
    if bs[k].underlined:
        return CyclicBipartition(bs[k:], marked), OrderedBipartition(bs[:k])
    return CyclicBipartition(bs[: k + 1], marked), OrderedBipartition(bs[k + 1:])


def join_pair(c: CyclicBipartition, s: OrderedBipartition,
              subset: Iterable[int] | None = None) -> OrderedBipartition:
    """Inverse of :func:`split_marked`.

    With ``subset`` given, ``c`` (over ``1..i``) is relabelled onto ``subset``
    and ``s`` (over ``1..n-i``) onto the complement in ``1..n``.
    """
    cb, sb, mark = c.blocks, s.blocks, c.distinguished
    if subset is not None:
        a = sorted(subset)
        n = c.size + s.size
        if len(a) != c.size or len(set(a)) != len(a) or not set(a) <= set(range(1, n + 1)):
            raise InvalidBipartition("subset must be a c.size-subset of 1..n")
        rest = sorted(set(range(1, n + 1)) - set(a))
        amap = {i + 1: v for i, v in enumerate(a)}
        bmap = {i + 1: v for i, v in enumerate(rest)}
        cb = tuple(b.relabel(amap) for b in cb)
        sb = tuple(b.relabel(bmap) for b in sb)
        mark = amap[mark]
    if cb[0].underlined and mark in cb[0].elements:
        return OrderedBipartition(sb + cb, mark)
    return OrderedBipartition(cb + sb, mark)


def _leftmost_napkinless(blocks: Sequence[Block]) -> int | None:
    for u, v in zip(blocks, blocks[1:]):
        if u.underlined and not v.underlined:
            # both want the napkin between them; the later arrival goes without
            return max(u.greatest, v.greatest)
    return None


def napkinless_rotation(alpha: OrderedBipartition) -> CyclicBipartition:
    """Map a straight table with both end napkins left over to a round table
    whose seat-1 guest is napkinless."""
    bs = alpha.blocks
    if not bs or not bs[0].underlined or bs[-1].underlined:
        raise InvalidBipartition("needs leftmost block underlined and rightmost plain")
    return CyclicBipartition(bs, _leftmost_napkinless(bs))


def napkinless_rotation_inverse(c: CyclicBipartition) -> OrderedBipartition:
    for rot in c.rotations():
        if rot[0].underlined and not rot[-1].underlined:
            if _leftmost_napkinless(rot) == c.distinguished:
                return OrderedBipartition(rot)
    raise InvalidBipartition(f"{c}: distinguished guest is not napkinless")


def _set_partitions_ordered(items: tuple[int, ...]) -> Iterator[list[frozenset[int]]]:
    if not items:
        yield []
        return
    for r in range(1, len(items) + 1):
        for first in itertools.combinations(items, r):
            rest = tuple(v for v in items if v not in first)
            for tail in _set_partitions_ordered(rest):
                yield [frozenset(first)] + tail


def all_ordered_bipartitions(n: int) -> Iterator[OrderedBipartition]:
    """Every ordered bipartition of ``1..n`` (no validity filter)."""
    for parts in _set_partitions_ordered(tuple(range(1, n + 1))):
        for flags in itertools.product((False, True), repeat=len(parts)):
            yield OrderedBipartition(Block(b, u) for b, u in zip(parts, flags))

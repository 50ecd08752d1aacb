"""Finite ranked posets with a minimum: Möbius function, characteristic
polynomial, Whitney numbers and intervals.

These are the brute-force routines the closed forms are checked against, so
they know nothing about where a poset came from.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from .polynomial import IntPolynomial

MAX_ORDER_ELEMENTS = 100_000


class PosetError(ValueError):
    pass


def _bit_indices(mask: int) -> np.ndarray:
    if mask == 0:
        return np.empty(0, dtype=np.intp)
    raw = np.frombuffer(mask.to_bytes((mask.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little"))


@dataclass(frozen=True, eq=False)
class RankedPoset:
    """Elements are ``0..n_elements-1``; ``covers`` holds (lower, upper) pairs."""

    n_elements: int
    covers: tuple
    rank: tuple
    bottom: int
    labels: tuple = ()

    def __post_init__(self):
        n = self.n_elements
        covers = tuple(sorted({(int(a), int(b)) for a, b in self.covers}))
        object.__setattr__(self, "covers", covers)
        object.__setattr__(self, "rank", tuple(int(r) for r in self.rank))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.rank) != n or len(self.labels) != n:
            raise PosetError("rank and labels must have one entry per element")
        if n > MAX_ORDER_ELEMENTS:
            raise PosetError(f"poset has {n} elements; order structure capped at {MAX_ORDER_ELEMENTS}")
        if not 0 <= self.bottom < n:
            raise PosetError("bottom index out of range")
        for a, b in covers:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise PosetError(f"bad cover pair ({a}, {b})")
            if self.rank[b] != self.rank[a] + 1:
                raise PosetError(f"cover ({a}, {b}) does not raise rank by one")
        if self.rank[self.bottom] != 0:
            raise PosetError("bottom must have rank 0")
        down = self.down_sets
        full = (1 << n) - 1
        reach = 0
        for x in range(n):
            if (down[x] >> self.bottom) & 1:
                reach |= 1 << x
        if reach != full:
            raise PosetError("no unique bottom: some element is not above the bottom")

    @cached_property
    def lower_covers(self) -> tuple:
        lo = [[] for _ in range(self.n_elements)]
        for a, b in self.covers:
            lo[b].append(a)
        return tuple(tuple(x) for x in lo)

    @cached_property
    def upper_covers(self) -> tuple:
        up = [[] for _ in range(self.n_elements)]
        for a, b in self.covers:
            up[a].append(b)
        return tuple(tuple(x) for x in up)

    @cached_property
    def order_by_rank(self) -> tuple:
        return tuple(sorted(range(self.n_elements), key=lambda x: (self.rank[x], x)))

    @cached_property
    def down_sets(self) -> tuple:
        """Bitset of ``{y : y <= x}`` for every x."""
        down = [0] * self.n_elements
        for x in self.order_by_rank:
            m = 1 << x
            for y in self.lower_covers[x]:
                m |= down[y]
            down[x] = m
        return tuple(down)

    @property
    def max_rank(self) -> int:
        return max(self.rank)

    def leq(self, a: int, b: int) -> bool:
        return bool((self.down_sets[b] >> a) & 1)

    def index_of(self, label) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise PosetError(f"label {label!r} not in poset") from None

    @cached_property
    def _label_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def rank_sizes(self) -> list[int]:
        sizes = [0] * (self.max_rank + 1)
        for r in self.rank:
            sizes[r] += 1
        return sizes

    def maximal_elements(self) -> list[int]:
        return [x for x in range(self.n_elements) if not self.upper_covers[x]]

    def atoms(self) -> list[int]:
        return list(self.upper_covers[self.bottom])

    def to_json(self, labeler=str) -> dict:
        return {
            "elements": [labeler(lab) for lab in self.labels],
            "covers": [list(c) for c in self.covers],
            "rank": list(self.rank),
        }

    def to_dot(self, name: str = "P", labeler=str) -> str:
        lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;"]
        for i, lab in enumerate(self.labels):
            lines.append(f"  n{i} [label={json.dumps(labeler(lab), ensure_ascii=False)}];")
        for a, b in self.covers:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def poset_from_json(data: dict) -> RankedPoset:
    elems = data["elements"]
    rank = data["rank"]
    bottoms = [i for i, r in enumerate(rank) if r == 0]
    if len(bottoms) != 1:
        raise PosetError("no unique bottom")
    return RankedPoset(len(elems), tuple(map(tuple, data["covers"])), tuple(rank), bottoms[0], tuple(elems))


def mobius_table(poset: RankedPoset) -> list[int]:
    """mu(bottom, x) for every element x, by the defining recursion."""
    n = poset.n_elements
    mu = np.zeros(n, dtype=np.int64)
    out = [0] * n
    down = poset.down_sets
    for x in poset.order_by_rank:
        if x == poset.bottom:
            v = 1
        else:
            below = down[x] & ~(1 << x)
            v = -int(mu[_bit_indices(below)].sum())
        mu[x] = v
        out[x] = v
    return out


def char_poly_bruteforce(poset: RankedPoset, ambient_rank: int, mu: Sequence[int] | None = None) -> IntPolynomial:
    """sum_x mu(0, x) t^(ambient_rank - rk x)."""
    if ambient_rank < poset.max_rank:
        raise PosetError(f"ambient rank {ambient_rank} below poset rank {poset.max_rank}")
    if mu is None:
        mu = mobius_table(poset)
    coeffs = [0] * (ambient_rank + 1)
    for x in range(poset.n_elements):
        coeffs[ambient_rank - poset.rank[x]] += mu[x]
    return IntPolynomial(coeffs)


def whitney_ranks(poset: RankedPoset, mu: Sequence[int] | None = None) -> dict[int, int]:
    """Dimension of Whitney homology in each rank, as the |mu| sum.

    Only meaningful when every lower interval is a geometric lattice; this
    is not checked.
    """
    if mu is None:
        mu = mobius_table(poset)
    out: dict[int, int] = defaultdict(int)
    for x in range(poset.n_elements):
        out[poset.rank[x]] += abs(mu[x])
    return dict(sorted(out.items()))


def interval(poset: RankedPoset, a: int, b: int) -> RankedPoset:
    """The closed interval [a, b], reranked so that a has rank 0."""
    if not poset.leq(a, b):
        raise PosetError(f"{poset.labels[a]} is not below {poset.labels[b]}")
    down = poset.down_sets
    members = [x for x in _bit_indices(down[b]).tolist() if (down[x] >> a) & 1]
    members.sort(key=lambda x: (poset.rank[x], x))
    pos = {x: i for i, x in enumerate(members)}
    covers = [(pos[lo], pos[x]) for x in members for lo in poset.lower_covers[x] if lo in pos]
    r0 = poset.rank[a]
    return RankedPoset(
        len(members),
        tuple(covers),
        tuple(poset.rank[x] - r0 for x in members),
        pos[a],
        tuple(poset.labels[x] for x in members),
    )


def chain(length: int) -> RankedPoset:
    return RankedPoset(length + 1, tuple((i, i + 1) for i in range(length)), tuple(range(length + 1)), 0)


def product(posets: Sequence[RankedPoset]) -> RankedPoset:
    """Cartesian product with componentwise order; labels are tuples."""
    elems: list[tuple[int, ...]] = [()]
    for P in posets:
        elems = [e + (x,) for e in elems for x in range(P.n_elements)]
    idx = {e: i for i, e in enumerate(elems)}
    covers = []
    for e in elems:
        for k, P in enumerate(posets):
            for up in P.upper_covers[e[k]]:
                f = e[:k] + (up,) + e[k + 1:]
                covers.append((idx[e], idx[f]))
    rank = [sum(P.rank[x] for P, x in zip(posets, e)) for e in elems]
    bottom = idx[tuple(P.bottom for P in posets)]
    labels: list[Any] = [tuple(P.labels[x] for P, x in zip(posets, e)) for e in elems]
    return RankedPoset(len(elems), tuple(covers), tuple(rank), bottom, tuple(labels))

"""S-Dowling posets D_n(G, S) and their invariant subposets.

An element is a partial G-partition of {1..n} whose blocks carry colorings
b: B -> G up to right multiplication, together with an S-coloring of the
zero block (everything not covered by a block).  Colorings are stored in
the normal form b(min B) = identity, so equal elements are equal tuples.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .groups import FiniteGroup, GSetAction, GroupError, is_equivariant, trivial_action
from .poset import RankedPoset

DEFAULT_CAP = 200_000
CAP_ENV = "DOWLINGKIT_CAP"


class MalformedElementError(ValueError):
    pass


class OrderError(ValueError):
    pass


class MorphismError(ValueError):
    pass


class EnumerationCapError(RuntimeError):
    pass


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True, order=True)
class DowlingElement:
    """``blocks`` is a tuple of ``(indices, colors)`` pairs sorted by smallest
    index, with ``colors[0]`` the group identity; ``zero`` is a tuple of
    ``(index, point)`` pairs sorted by index.  Indices run over 1..n."""

    n: int
    blocks: tuple
    zero: tuple

    @property
    def rank(self) -> int:
        return self.n - len(self.blocks)

    @property
    def zero_block(self) -> tuple:
        return tuple(i for i, _ in self.zero)

    def zero_map(self) -> dict:
        return dict(self.zero)

    def block_of(self, i: int):
        for blk in self.blocks:
            if i in blk[0]:
                return blk
        return None

    def sort_key(self):
        return (self.rank, self.blocks, self.zero)


def bottom(n: int, group: FiniteGroup) -> DowlingElement:
    e = group.identity
    return DowlingElement(n, tuple(((i,), (e,)) for i in range(1, n + 1)), ())


def canonicalize(n: int, group: FiniteGroup, blocks: Iterable, zero: Mapping | Iterable = ()) -> DowlingElement:
    """Normal form of a raw element.

    ``blocks`` holds ``(indices, colors)`` pairs or ``{index: color}`` dicts
    with arbitrary coloring representatives; ``zero`` maps each zero-block
    index to a point of S.  Each coloring is right-multiplied by the inverse
    of its value at the smallest index.
    """
    seen: set[int] = set()
    out = []
    for blk in blocks:
        if isinstance(blk, Mapping):
            pairs = sorted((int(i), int(g)) for i, g in blk.items())
        else:
            idx, cols = blk
            idx, cols = list(idx), list(cols)
            if len(idx) != len(cols):
                raise MalformedElementError("block coloring is not total on its block")
            pairs = sorted(zip(map(int, idx), map(int, cols)))
        if not pairs:
            raise MalformedElementError("empty block")
        for i, g in pairs:
            if not 1 <= i <= n:
                raise MalformedElementError(f"index {i} out of range 1..{n}")
            if i in seen:
                raise MalformedElementError(f"index {i} appears twice")
            if not 0 <= g < group.order:
                raise MalformedElementError(f"group index {g} out of range")
            seen.add(i)
        shift = group.inverse[pairs[0][1]]
        out.append((tuple(i for i, _ in pairs), tuple(group.table[g][shift] for _, g in pairs)))
    zpairs = sorted((int(i), int(s)) for i, s in (zero.items() if isinstance(zero, Mapping) else zero))
    for i, _ in zpairs:
        if not 1 <= i <= n:
            raise MalformedElementError(f"index {i} out of range 1..{n}")
        if i in seen:
            raise MalformedElementError(f"index {i} appears twice")
        seen.add(i)
    if len(seen) != n:
        missing = sorted(set(range(1, n + 1)) - seen)
        raise MalformedElementError(f"indices {missing} are neither in a block nor colored")
    out.sort()
    return DowlingElement(n, tuple(out), tuple(zpairs))


@dataclass(frozen=True, eq=False)
class DowlingContext:
    """Everything needed to work inside D_n(G, S) or a subposet D^T(G, S).

    ``allowed_singleton_orbits`` lists the orbit indices whose zero-block
    fiber may have exactly one point; fibers of the remaining orbits must
    have size != 1.  ``None`` means every orbit is allowed.
    """

    n: int
    action: GSetAction
    allowed_singleton_orbits: frozenset | None = None
    orbits: object = field(init=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        od = self.action.orbit_data
        object.__setattr__(self, "orbits", od)
        allowed = self.allowed_singleton_orbits
        if allowed is None:
            allowed = frozenset(range(len(od)))
        allowed = frozenset(allowed)
        if not allowed <= frozenset(range(len(od))):
            raise ValueError("allowed_singleton_orbits must be orbit indices")
        object.__setattr__(self, "allowed_singleton_orbits", allowed)

    @property
    def group(self) -> FiniteGroup:
        return self.action.group

    @property
    def is_filtered(self) -> bool:
        return len(self.allowed_singleton_orbits) != len(self.orbits)

    @property
    def forbidden_orbits(self) -> frozenset:
        return frozenset(range(len(self.orbits))) - self.allowed_singleton_orbits

    def with_n(self, n: int) -> "DowlingContext":
        return DowlingContext(n, self.action, self.allowed_singleton_orbits)

    def bottom(self) -> DowlingElement:
        return bottom(self.n, self.group)

    def canonicalize(self, blocks, zero=()) -> DowlingElement:
        e = canonicalize(self.n, self.group, blocks, zero)
        if any(not 0 <= s < self.action.size for _, s in e.zero):
            raise MalformedElementError("zero-block color out of range")
        return e

    def retained(self, e: DowlingElement) -> bool:
        """Whether ``e`` lies in the subposet (no lone point in a forbidden orbit)."""
        forbidden = self.forbidden_orbits
        if not forbidden:
            return True
        counts: dict[int, int] = {}
        orbit_of = self.orbits.orbit_of
        for _, s in e.zero:
            o = orbit_of[s]
            counts[o] = counts.get(o, 0) + 1
        return all(counts.get(o, 0) != 1 for o in forbidden)

    def render(self, e: DowlingElement) -> str:
        return render(e, self.group, self.action)

    def parse(self, text: str) -> DowlingElement:
        return parse_element(text, self.group, self.action, self.n)


def dowling_context(n: int, action: GSetAction, allowed_singleton_orbits=None) -> DowlingContext:
    return DowlingContext(n, action, allowed_singleton_orbits)


def dd_context(n: int, group: FiniteGroup) -> DowlingContext:
    """DD_n(G): the Dowling lattice with no singleton zero block."""
    return DowlingContext(n, trivial_action(group, ("0",)), frozenset())


def subposet_context(n: int, action: GSetAction, kept_points) -> DowlingContext:
    """D^T(G, S) inside D_n(G, T u S), where ``kept_points`` (the set T) are
    point indices of ``action`` and must form a union of orbits."""
    T = set(kept_points)
    od = action.orbit_data
    allowed = set()
    for k, orb in enumerate(od.orbits):
        inside = T.intersection(orb)
        if inside and len(inside) != len(orb):
            raise ValueError("T is not G-invariant")
        if inside:
            allowed.add(k)
    return DowlingContext(n, action, frozenset(allowed))


# -- covering relations -------------------------------------------------------

def covers_up(ctx: DowlingContext, e: DowlingElement) -> list[DowlingElement]:
    """All elements covering ``e`` in the unfiltered poset D_n(G, S)."""
    G = ctx.group
    table = G.table
    act = ctx.action.act
    npts = ctx.action.size
    blocks = e.blocks
    out = []
    nb = len(blocks)
    # merge: c = a u b.g
    for x in range(nb):
        A, a = blocks[x]
        for y in range(x + 1, nb):
            B, b = blocks[y]
            rest = blocks[:x] + blocks[x + 1:y] + blocks[y + 1:]
            for g in range(G.order):
                pairs = sorted(list(zip(A, a)) + [(i, table[c][g]) for i, c in zip(B, b)])
                merged = (tuple(i for i, _ in pairs), tuple(c for _, c in pairs))
                new = list(rest)
                new.insert(x, merged)
                out.append(DowlingElement(e.n, tuple(new), e.zero))
    # color: z'(i) = b(i).s
    for x in range(nb):
        B, b = blocks[x]
        rest = blocks[:x] + blocks[x + 1:]
        for s in range(npts):
            zero = tuple(sorted(e.zero + tuple((i, act[c][s]) for i, c in zip(B, b))))
            out.append(DowlingElement(e.n, rest, zero))
    out = sorted(set(out))
    return out


def covers_down(ctx: DowlingContext, e: DowlingElement) -> list[DowlingElement]:
    """All elements covered by ``e`` in the unfiltered poset."""
    G = ctx.group
    table, inv = G.table, G.inverse
    act = ctx.action.act
    out = []
    blocks = e.blocks
    for x, (C, c) in enumerate(blocks):
        rest = blocks[:x] + blocks[x + 1:]
        m = len(C)
        # split C into two nonempty parts; the part containing min C keeps c
        for mask in range(1, 1 << (m - 1)):
            A, a, B, b = [C[0]], [c[0]], [], []
            for k in range(1, m):
                if (mask >> (k - 1)) & 1:
                    B.append(C[k]); b.append(c[k])
                else:
                    A.append(C[k]); a.append(c[k])
            shift = inv[b[0]]
            b = [table[h][shift] for h in b]
            new = sorted(rest + ((tuple(A), tuple(a)), (tuple(B), tuple(b))))
            out.append(DowlingElement(e.n, tuple(new), e.zero))
    # uncolor: a subset B of the zero block whose colors form one G-translate
    z = e.zero
    if z:
        idx = [i for i, _ in z]
        zmap = dict(z)
        for r in range(1, len(idx) + 1):
            for B in combinations(idx, r):
                s0 = zmap[B[0]]
                # b(min) = e forces s = z(min B); other colors need g with g.s = z(i)
                choices = []
                for i in B[1:]:
                    gs = [g for g in range(G.order) if act[g][s0] == zmap[i]]
                    if not gs:
                        break
                    choices.append(gs)
                else:
                    rest_zero = tuple(p for p in z if p[0] not in B)
                    for combo in _product(choices):
                        blk = (B, (G.identity,) + tuple(combo))
                        out.append(DowlingElement(e.n, tuple(sorted(blocks + (blk,))), rest_zero))
    return sorted(set(out))


def _product(lists):
    if not lists:
        yield ()
        return
    head, *tail = lists
    for x in head:
        for rest in _product(tail):
            yield (x,) + rest


# -- enumeration ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DowlingPoset(RankedPoset):
    context: object = None


def enumerate_poset(ctx: DowlingContext, cap: int | None = None) -> DowlingPoset:
    """Breadth-first closure of the bottom under ``covers_up``.

    In a filtered context elements failing ``ctx.retained`` are dropped;
    covers are then the rank-adjacent comparable pairs among retained
    elements, which are exactly the retained cover pairs of the big poset.
    Elements are indexed by (rank, canonical form).
    """
    cap = default_cap() if cap is None else cap
    start = ctx.bottom()
    seen = {start}
    frontier = [start]
    cover_pairs = []
    while frontier:
        nxt = set()
        for x in frontier:
            for y in covers_up(ctx, x):
                if not ctx.retained(y):
                    continue
                cover_pairs.append((x, y))
                if y not in seen:
                    nxt.add(y)
        seen.update(nxt)
        if len(seen) > cap:
            raise EnumerationCapError(
                f"enumeration exceeded the size cap of {cap} elements "
                f"(n={ctx.n}, |G|={ctx.group.order}, |S|={ctx.action.size}); "
                f"raise it with --cap or {CAP_ENV}")
        frontier = sorted(nxt)
    elems = sorted(seen, key=DowlingElement.sort_key)
    index = {x: i for i, x in enumerate(elems)}
    covers = tuple((index[x], index[y]) for x, y in cover_pairs)
    return DowlingPoset(len(elems), covers, tuple(x.rank for x in elems), 0, tuple(elems), context=ctx)


# -- order -----------------------------------------------------------------------

def leq(ctx: DowlingContext, a: DowlingElement, b: DowlingElement) -> bool:
    """Refinement order: each block of ``a`` sits inside a block of ``b`` with
    compatible coloring, or is swallowed by b's zero block through a single
    equivariant coloring; a's zero coloring is a restriction of b's."""
    if a.n != b.n:
        raise ValueError(f"elements live over different ground sets ({a.n} vs {b.n})")
    table = ctx.group.table
    act = ctx.action.act
    zb = dict(b.zero)
    for i, s in a.zero:
        if zb.get(i) != s:
            return False
    where = {}
    for k, (B, _) in enumerate(b.blocks):
        for i in B:
            where[i] = k
    for A, acol in a.blocks:
        m = A[0]
        if m in zb:
            s = zb[m]
            for i, g in zip(A, acol):
                if zb.get(i) != act[g][s]:
                    return False
        else:
            k = where[m]
            B, bcol = b.blocks[k]
            bm = dict(zip(B, bcol))
            ratio = bm[m]
            for i, g in zip(A, acol):
                if bm.get(i) != table[g][ratio]:
                    return False
    return True


# -- local structure ----------------------------------------------------------------

@dataclass(frozen=True)
class IntervalFactor:
    """One factor of a lower interval: ``Partition(size)``, ``Dowling(subgroup, size)``
    or ``DowlingNoSingletonZero(subgroup, size)``; ``subgroup`` is a tuple of
    element indices of the ambient group and ``orbit`` the orbit index."""

    kind: str
    size: int
    subgroup: tuple | None = None
    orbit: int | None = None

    @property
    def group_order(self) -> int:
        return 1 if self.subgroup is None else len(self.subgroup)

    def __str__(self):
        if self.kind == "Partition":
            return f"Partition({self.size})"
        return f"{self.kind}(|G|={self.group_order}, {self.size})"


def interval_factors(ctx: DowlingContext, e: DowlingElement) -> list[IntervalFactor]:
    od = ctx.orbits
    out = [IntervalFactor("Partition", len(B)) for B, _ in e.blocks]
    counts = [0] * len(od)
    for _, s in e.zero:
        counts[od.orbit_of[s]] += 1
    for o, m in enumerate(counts):
        if m == 0:
            continue
        kind = "Dowling" if o in ctx.allowed_singleton_orbits else "DowlingNoSingletonZero"
        out.append(IntervalFactor(kind, m, od.stabilizers[o], o))
    return out


def lower_decompose(ctx: DowlingContext, beta: DowlingElement, alpha: DowlingElement):
    """Image of ``alpha`` under the isomorphism [0, beta] -> prod Q_B x prod D(G_o).

    Returns ``(partitions, dowlings)``: ``partitions[k]`` is the set partition
    (tuple of index tuples) that alpha induces on the k-th block of beta;
    ``dowlings[o]`` is a DowlingElement over the positions 1..m of
    ``z_beta^{-1}(o)``, colored in the stabilizer subgroup (group indices
    renumbered as positions in the sorted stabilizer).  Uses the smallest-index
    transporters of the orbit data.
    """
    if not leq(ctx, alpha, beta):
        raise OrderError("alpha is not below beta")
    G = ctx.group
    table, inv = G.table, G.inverse
    od = ctx.orbits
    zb = dict(beta.zero)
    parts = []
    for B, _ in beta.blocks:
        Bs = set(B)
        parts.append(tuple(A for A, _ in alpha.blocks if set(A) <= Bs))
    fibers = {o: [] for o in range(len(od))}
    for i, s in beta.zero:
        fibers[od.orbit_of[s]].append(i)
    dowlings = {}
    for o, fib in fibers.items():
        if not fib:
            continue
        pos = {i: k + 1 for k, i in enumerate(fib)}
        stab = od.stabilizers[o]
        spos = {g: k for k, g in enumerate(stab)}
        sub_blocks = []
        for A, acol in alpha.blocks:
            if A[0] not in zb or od.orbit_of[zb[A[0]]] != o:
                continue
            # representative a with z_beta(i) = a(i).rep: right-shift by h, h.rep = z(min A)
            h = od.transporter[zb[A[0]]]
            a = [table[g][h] for g in acol]
            cols = [spos[table[inv[od.transporter[zb[i]]]][g]] for i, g in zip(A, a)]
            sub_blocks.append(([pos[i] for i in A], cols))
        sub_zero = [(pos[i], 0) for i, _ in alpha.zero if i in pos]
        sub_group = G.subgroup(stab)
        dowlings[o] = canonicalize(len(fib), sub_group, sub_blocks, sub_zero)
    return tuple(parts), dowlings


def upper_label(ctx: DowlingContext, a: DowlingElement, b: DowlingElement) -> DowlingElement:
    """Image of ``b`` under the isomorphism D_{>= a} -> D_l(G, S), l = #blocks of a.

    Blocks of ``a`` are numbered 1..l in canonical order with their normalized
    colorings as representatives.
    """
    if not leq(ctx, a, b):
        raise OrderError("a is not below b")
    zb = dict(b.zero)
    owner = {}
    for k, (B, _) in enumerate(b.blocks):
        for i in B:
            owner[i] = k
    grouped: dict[int, dict[int, int]] = {}
    zero = {}
    for t, (A, _) in enumerate(a.blocks, start=1):
        m = A[0]
        if m in zb:
            zero[t] = zb[m]
        else:
            k = owner[m]
            B, bcol = b.blocks[k]
            grouped.setdefault(k, {})[t] = bcol[B.index(m)]
    return canonicalize(len(a.blocks), ctx.group, list(grouped.values()), zero)


# -- functoriality --------------------------------------------------------------------

@dataclass(frozen=True)
class DisjointUnion:
    other: DowlingElement


@dataclass(frozen=True)
class Injection:
    """``images[i-1]`` is the image of i in {1..target_n}; new singleton
    blocks are colored by the identity of ``group``."""

    images: tuple
    target_n: int
    group: FiniteGroup


@dataclass(frozen=True)
class EquivariantMap:
    """``images[s]`` is the image of point s of ``source`` in ``target``."""

    images: tuple
    source: GSetAction
    target: GSetAction


@dataclass(frozen=True)
class Homomorphism:
    """``images[g]`` is the image of g in ``target``."""

    images: tuple
    source: FiniteGroup
    target: FiniteGroup


def apply_functorial(e: DowlingElement, morphism) -> DowlingElement:
    if isinstance(morphism, DisjointUnion):
        f = morphism.other
        shifted = tuple((tuple(i + e.n for i in B), c) for B, c in f.blocks)
        zero = e.zero + tuple((i + e.n, s) for i, s in f.zero)
        return DowlingElement(e.n + f.n, tuple(sorted(e.blocks + shifted)), zero)
    if isinstance(morphism, Injection):
        im = tuple(morphism.images)
        m = morphism.target_n
        if len(im) != e.n or len(set(im)) != e.n or any(not 1 <= j <= m for j in im):
            raise MorphismError("not an injection {1..n} -> {1..m}")
        blocks = [dict((im[i - 1], g) for i, g in zip(B, c)) for B, c in e.blocks]
        used = set(im)
        blocks += [{j: morphism.group.identity} for j in range(1, m + 1) if j not in used]
        zero = {im[i - 1]: s for i, s in e.zero}
        return canonicalize(m, morphism.group, blocks, zero)
    if isinstance(morphism, EquivariantMap):
        if not is_equivariant(morphism.source, morphism.target, morphism.images):
            raise MorphismError("map of G-sets is not equivariant")
        return DowlingElement(e.n, e.blocks, tuple((i, morphism.images[s]) for i, s in e.zero))
    if isinstance(morphism, Homomorphism):
        src, dst, im = morphism.source, morphism.target, tuple(morphism.images)
        if not src.is_homomorphism(dst, im):
            raise MorphismError("map of groups is not a homomorphism")
        blocks = [(B, tuple(im[g] for g in c)) for B, c in e.blocks]
        return canonicalize(e.n, dst, blocks, e.zero)
    raise MorphismError(f"unknown morphism {morphism!r}")


# -- text and JSON ----------------------------------------------------------------------

EMPTY = "∅"


def render(e: DowlingElement, group: FiniteGroup, action: GSetAction) -> str:
    """Bracket notation, e.g. ``[1_e 3_g | 2_e || 4_z1 5_z1]``."""
    if e.blocks:
        left = " | ".join(" ".join(f"{i}_{group.label(g)}" for i, g in zip(B, c)) for B, c in e.blocks)
    else:
        left = EMPTY
    right = " ".join(f"{i}_{action.label(s)}" for i, s in e.zero) if e.zero else EMPTY
    return f"[{left} || {right}]"


_TOKEN = re.compile(r"^(\d+)(?:_(.+))?$")


def parse_element(text: str, group: FiniteGroup, action: GSetAction, n: int | None = None) -> DowlingElement:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")) or "||" not in s:
        raise MalformedElementError(f"expected '[blocks || zero]', got {text!r}")
    left, right = s[1:-1].split("||", 1)
    blocks = []
    for chunk in left.split("|"):
        chunk = chunk.strip()
        if chunk in ("", EMPTY):
            continue
        blk = {}
        for tok in chunk.split():
            m = _TOKEN.match(tok)
            if not m:
                raise MalformedElementError(f"bad block entry {tok!r}")
            try:
                blk[int(m.group(1))] = group.index(m.group(2)) if m.group(2) else group.identity
            except GroupError as exc:
                raise MalformedElementError(str(exc)) from None
        blocks.append(blk)
    zero = {}
    right = right.strip()
    if right not in ("", EMPTY):
        for tok in right.split():
            m = _TOKEN.match(tok)
            if not m or m.group(2) is None:
                raise MalformedElementError(f"bad zero-block entry {tok!r}")
            try:
                zero[int(m.group(1))] = action.index(m.group(2))
            except GroupError as exc:
                raise MalformedElementError(str(exc)) from None
    if n is None:
        n = sum(len(b) for b in blocks) + len(zero)
    return canonicalize(n, group, blocks, zero)


def element_to_json(e: DowlingElement, group: FiniteGroup, action: GSetAction) -> dict:
    return {
        "n": e.n,
        "blocks": [{"indices": list(B), "colors": [group.label(g) for g in c]} for B, c in e.blocks],
        "zero": {str(i): action.label(s) for i, s in e.zero},
    }


def element_from_json(data: dict, group: FiniteGroup, action: GSetAction) -> DowlingElement:
    try:
        blocks = [(b["indices"], [group.index(c) for c in b["colors"]]) for b in data["blocks"]]
        zero = {int(i): action.index(s) for i, s in data["zero"].items()}
        return canonicalize(int(data["n"]), group, blocks, zero)
    except (KeyError, GroupError) as exc:
        raise MalformedElementError(f"bad element JSON: {exc}") from None

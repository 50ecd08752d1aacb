"""Finite groups given by multiplication tables, and finite G-sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group with elements ``0..order-1`` and an explicit Cayley table.

    ``table[a][b]`` is the index of the product ``a*b``.
    """

    elements: tuple
    table: tuple
    name: str = ""
    identity: int = field(init=False)
    inverse: tuple = field(init=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "table", table)
        n = len(elements)
        if n == 0:
            raise GroupError("a group needs at least one element")
        if len(set(elements)) != n:
            raise GroupError("element identifiers must be unique")
        if len(table) != n or any(len(row) != n for row in table):
            raise GroupError(f"table must be {n}x{n}")
        if any(not 0 <= x < n for row in table for x in row):
            raise GroupError("table entries out of range")

        ids = [e for e in range(n)
               if all(table[e][a] == a and table[a][e] == a for a in range(n))]
        if len(ids) != 1:
            raise GroupError("table has no two-sided identity")
        e = ids[0]
        inv = []
        for a in range(n):
            cands = [b for b in range(n) if table[a][b] == e and table[b][a] == e]
            if not cands:
                raise GroupError(f"element {elements[a]!r} has no inverse")
            inv.append(cands[0])
        for a in range(n):
            ta = table[a]
            for b in range(n):
                tab = ta[b]
                for c in range(n):
                    if table[tab][c] != ta[table[b][c]]:
                        raise GroupError("table is not associative")
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", tuple(inv))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        r = self.identity
        if k < 0:
            a, k = self.inverse[a], -k
        for _ in range(k):
            r = self.table[r][a]
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def label(self, a: int) -> str:
        return str(self.elements[a])

    def index(self, label) -> int:
        for i, x in enumerate(self.elements):
            if x == label or str(x) == str(label):
                return i
        raise GroupError(f"unknown group element {label!r} in {self.name or 'group'}")

    def is_subgroup(self, subset) -> bool:
        sub = set(subset)
        if self.identity not in sub:
            return False
        return all(self.table[a][b] in sub for a in sub for b in sub)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by index."""
        gens: list[int] = []
        span = {self.identity}
        for a in range(self.order):
            if a in span:
                continue
            gens.append(a)
            span = _closure(self, gens)
            if len(span) == self.order:
                break
        return tuple(gens)

    def subgroup(self, subset, name: str = "") -> "FiniteGroup":
        """Convert an element-index subgroup into a standalone group.

        Elements of the result are in increasing order of their index here;
        ``result.elements`` holds the original labels.
        """
        idx = sorted(set(subset))
        if not self.is_subgroup(idx):
            raise GroupError("subset is not a subgroup")
        pos = {a: i for i, a in enumerate(idx)}
        table = [[pos[self.table[a][b]] for b in idx] for a in idx]
        return FiniteGroup(tuple(self.elements[a] for a in idx), table, name=name)

    def is_homomorphism(self, other: "FiniteGroup", images) -> bool:
        images = tuple(images)
        if len(images) != self.order:
            return False
        return all(
            images[self.table[a][b]] == other.table[images[a]][images[b]]
            for a in range(self.order)
            for b in range(self.order)
        )

    def to_json(self) -> dict:
        return {"elements": [str(x) for x in self.elements],
                "table": [list(row) for row in self.table]}


def _closure(group: FiniteGroup, gens) -> set[int]:
    span = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = group.table[a][g]
                if b not in span:
                    span.add(b)
                    nxt.append(b)
        frontier = nxt
    return span


def cyclic_group(d: int) -> FiniteGroup:
    """Z_d with generator ``g``; element k is g^k, labeled e, g, g^2, ..."""
    if d < 1:
        raise GroupError(f"invalid group order {d}")
    labels = ["e"] + ["g" if k == 1 else f"g^{k}" for k in range(1, d)]
    table = [[(a + b) % d for b in range(d)] for a in range(d)]
    return FiniteGroup(tuple(labels), table, name=f"Z{d}")


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


@dataclass(frozen=True)
class GSetAction:
    """An action of ``group`` on ``points``; ``act[g][s]`` is the image of point s under g."""

    group: FiniteGroup
    points: tuple
    act: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        act = tuple(tuple(int(x) for x in row) for row in self.act)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "act", act)
        G, m = self.group, len(pts)
        if len(set(pts)) != m:
            raise GroupError("point identifiers must be unique")
        if len(act) != G.order or any(len(row) != m for row in act):
            raise GroupError(f"action table must be {G.order}x{m}")
        if any(not 0 <= x < m for row in act for x in row):
            raise GroupError("action table entries out of range")
        if any(act[G.identity][s] != s for s in range(m)):
            raise GroupError("identity does not act trivially")
        for g in range(G.order):
            for h in range(G.order):
                gh = G.table[g][h]
                for s in range(m):
                    if act[g][act[h][s]] != act[gh][s]:
                        raise GroupError("action is not compatible with the group law")

    @property
    def size(self) -> int:
        return len(self.points)

    def __call__(self, g: int, s: int) -> int:
        return self.act[g][s]

    def label(self, s: int) -> str:
        return str(self.points[s])

    def index(self, label) -> int:
        for i, x in enumerate(self.points):
            if x == label or str(x) == str(label):
                return i
        raise GroupError(f"unknown point {label!r}")

    @cached_property
    def orbit_data(self) -> "OrbitData":
        return orbit_data(self)

    def to_json(self) -> dict:
        return {"group": self.group.to_json(),
                "points": [str(p) for p in self.points],
                "act": [list(row) for row in self.act]}


@dataclass(frozen=True)
class OrbitData:
    """Orbits of a G-set with representatives, stabilizers and transporters.

    ``orbits[k]`` is a sorted tuple of point indices; ``reps[k]`` its smallest
    point; ``stabilizers[k]`` the element indices fixing ``reps[k]``;
    ``transporter[t]`` the smallest g with ``g . reps[orbit_of[t]] == t``.
    """

    orbits: tuple
    reps: tuple
    stabilizers: tuple
    orbit_of: tuple
    transporter: tuple

    def __len__(self):
        return len(self.orbits)


def orbit_data(action: GSetAction) -> OrbitData:
    G = action.group
    m = action.size
    orbit_of = [-1] * m
    orbits, reps, stabs = [], [], []
    transporter = [-1] * m
    for s in range(m):
        if orbit_of[s] >= 0:
            continue
        k = len(orbits)
        orb = set()
        for g in range(G.order):
            t = action.act[g][s]
            orb.add(t)
            if transporter[t] < 0:
                transporter[t] = g
        for t in orb:
            orbit_of[t] = k
        orbits.append(tuple(sorted(orb)))
        reps.append(s)
        stabs.append(tuple(g for g in range(G.order) if action.act[g][s] == s))
    return OrbitData(tuple(orbits), tuple(reps), tuple(stabs),
                     tuple(orbit_of), tuple(transporter))


def action_from_generator(group: FiniteGroup, points, gen_perm, generator: int = 1) -> GSetAction:
    """Build the action of a cyclic group from the permutation of its generator.

    ``gen_perm[s]`` is the image of point s under ``generator``.
    """
    m = len(points)
    act = [None] * group.order
    act[group.identity] = list(range(m))
    x, img = group.identity, list(range(m))
    for _ in range(group.order):
        x = group.table[x][generator]
        img = [gen_perm[s] for s in img]
        if act[x] is None:
            act[x] = img
        elif act[x] != img:
            raise GroupError("generator permutation is inconsistent with the group")
    if any(row is None for row in act):
        raise GroupError("generator does not generate the group")
    return GSetAction(group, tuple(points), act)


def trivial_action(group: FiniteGroup, points) -> GSetAction:
    pts = tuple(points)
    return GSetAction(group, pts, [list(range(len(pts)))] * group.order)


def regular_action(group: FiniteGroup) -> GSetAction:
    """The group acting on itself by left multiplication."""
    return GSetAction(group, group.elements, [list(row) for row in group.table])


def disjoint_union(a: GSetAction, b: GSetAction) -> GSetAction:
    if a.group is not b.group and a.group != b.group:
        raise GroupError("actions of different groups")
    off = a.size
    act = [list(ra) + [x + off for x in rb] for ra, rb in zip(a.act, b.act)]
    return GSetAction(a.group, a.points + b.points, act)


def empty_action(group: FiniteGroup) -> GSetAction:
    return GSetAction(group, (), [[] for _ in range(group.order)])


def is_equivariant(src: GSetAction, dst: GSetAction, images) -> bool:
    images = tuple(images)
    if len(images) != src.size:
        return False
    return all(images[src.act[g][s]] == dst.act[g][images[s]]
               for g in range(src.group.order) for s in range(src.size))


def action_from_json(spec: dict) -> GSetAction:
    """Parse ``{"group": {"elements", "table"}, "points", "act"}``."""
    try:
        g = spec["group"]
        group = FiniteGroup(tuple(g["elements"]), g["table"], name=g.get("name", ""))
        return GSetAction(group, tuple(spec["points"]), spec["act"])
    except KeyError as exc:
        raise GroupError(f"missing key {exc.args[0]!r} in action spec") from None

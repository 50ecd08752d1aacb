"""The arrangement A(G, X) for X a finite G-set of rational points.

X plays the role of X(F_q): layers are computed as point sets, and the
orbit configuration space is counted by brute force.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct

from .dowling import DowlingContext, DowlingElement, canonicalize, enumerate_poset, leq, subposet_context
from .groups import FiniteGroup, GSetAction, cyclic_group

MAX_TUPLES = 2_000_000


class SpaceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGSpace:
    """A finite G-set standing in for the rational points of a G-variety."""

    action: GSetAction
    name: str = ""

    @property
    def group(self) -> FiniteGroup:
        return self.action.group

    @property
    def points(self) -> tuple:
        return self.action.points

    @property
    def size(self) -> int:
        return self.action.size

    @cached_property
    def singular(self) -> tuple:
        """Points fixed by some non-identity element, as point indices."""
        G = self.group
        return tuple(x for x in range(self.size)
                     if any(self.action.act[g][x] == x for g in range(G.order) if g != G.identity))

    @cached_property
    def singular_action(self) -> GSetAction:
        """The G-set S of singular points; point k of S is point ``singular[k]`` of X."""
        return self.restricted_action(self.singular)

    def restricted_action(self, pts) -> GSetAction:
        pts = tuple(pts)
        pos = {x: k for k, x in enumerate(pts)}
        try:
            act = [[pos[self.action.act[g][x]] for x in pts] for g in range(self.group.order)]
        except KeyError:
            raise SpaceError("point set is not G-invariant") from None
        return GSetAction(self.group, tuple(self.points[x] for x in pts), act)

    def context(self, n: int) -> DowlingContext:
        return DowlingContext(n, self.singular_action)

    def stabilizer(self, x: int) -> tuple:
        return tuple(g for g in range(self.group.order) if self.action.act[g][x] == x)

    def is_invariant(self, pts) -> bool:
        T = set(pts)
        return all(self.action.act[g][x] in T for g in range(self.group.order) for x in T)


@dataclass(frozen=True)
class LayerEquations:
    """``diagonal_eqs`` holds (i, j, g) meaning g.x_i = x_j; ``point_eqs`` holds
    (i, s) meaning x_i = s, with s an index into the colored G-set."""

    diagonal_eqs: tuple = ()
    point_eqs: tuple = ()


def defining_equations(group: FiniteGroup, e: DowlingElement) -> LayerEquations:
    """All H_ij(g) with g b(i) = b(j) inside each block, and H_i^{z(i)} on the zero block."""
    t, inv = group.table, group.inverse
    diag = []
    for B, b in e.blocks:
        for i, bi in zip(B, b):
            for j, bj in zip(B, b):
                if i != j:
                    diag.append((i, j, t[bj][inv[bi]]))
    return LayerEquations(tuple(diag), tuple(e.zero))


def _check_size(space: FiniteGSpace, n: int):
    if space.size ** n > MAX_TUPLES:
        raise SpaceError(f"|X|^n = {space.size}^{n} exceeds the enumeration cap {MAX_TUPLES}")


def layer_points(space: FiniteGSpace, n: int, e: DowlingElement, colors=None) -> frozenset:
    """All tuples in X^n satisfying the defining equations of ``e``.

    ``colors[s]`` maps a zero-block color to a point of X; by default the
    colors are the singular points of ``space``.
    """
    if e.n != n:
        raise ValueError("element and n disagree")
    _check_size(space, n)
    if colors is None:
        colors = space.singular
    eqs = defining_equations(space.group, e)
    act = space.action.act
    pinned = {i - 1: colors[s] for i, s in eqs.point_eqs}
    diag = [(i - 1, j - 1, g) for i, j, g in eqs.diagonal_eqs]
    choices = [[pinned[k]] if k in pinned else range(space.size) for k in range(n)]
    out = set()
    for p in iproduct(*choices):
        if all(act[g][p[i]] == p[j] for i, j, g in diag):
            out.add(p)
    return frozenset(out)


def layer_parametrization(space: FiniteGSpace, e: DowlingElement, colors=None) -> frozenset:
    """The same layer built from its product structure: one free point y per
    block (x_i = b(i).y) and fixed points on the zero block."""
    if colors is None:
        colors = space.singular
    act = space.action.act
    blocks = e.blocks
    out = set()
    for ys in iproduct(range(space.size), repeat=len(blocks)):
        p = [None] * e.n
        for (B, b), y in zip(blocks, ys):
            for i, g in zip(B, b):
                p[i - 1] = act[g][y]
        for i, s in e.zero:
            p[i - 1] = colors[s]
        out.add(tuple(p))
    return frozenset(out)


def orbit_config_count(space: FiniteGSpace, n: int, removed=None) -> int:
    """Tuples in (X - T)^n with pairwise disjoint G-orbits; T defaults to S."""
    if n < 1:
        raise ValueError("n must be positive")
    T = set(space.singular if removed is None else removed)
    if not space.is_invariant(T):
        raise SpaceError("removed set T is not G-invariant")
    od = space.action.orbit_data
    free = [x for x in range(space.size) if x not in T]
    orbit_of = od.orbit_of

    def count(k, used):
        if k == n:
            return 1
        total = 0
        for x in free:
            o = orbit_of[x]
            if o not in used:
                used.add(o)
                total += count(k + 1, used)
                used.discard(o)
        return total

    return count(0, set())


def max_layer_at(space: FiniteGSpace, n: int, p) -> DowlingElement:
    """The largest element of the poset whose layer contains ``p``."""
    p = tuple(p)
    if len(p) != n:
        raise ValueError("point has the wrong length")
    G = space.group
    act = space.action.act
    spos = {x: k for k, x in enumerate(space.singular)}
    zero = {i + 1: spos[x] for i, x in enumerate(p) if x in spos}
    blocks: list[dict[int, int]] = []
    for i, x in enumerate(p, start=1):
        if i in zero:
            continue
        for blk in blocks:
            y = p[min(blk) - 1]
            gs = [g for g in range(G.order) if act[g][y] == x]
            if gs:
                # X - S is free, so the transport is unique
                blk[i] = gs[0]
                break
        else:
            blocks.append({i: G.identity})
    return canonicalize(n, G, blocks, zero)


@dataclass
class IncidenceReport:
    status: str
    n_elements: int
    collisions: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return self.status == "confirmed"

    def to_json(self) -> dict:
        return {"status": self.status, "n_elements": self.n_elements,
                "collisions": [list(map(str, c)) for c in self.collisions],
                "mismatches": [list(map(str, m)) for m in self.mismatches]}


def verify_incidence(space: FiniteGSpace, n: int, ctx: DowlingContext | None = None, colors=None) -> IncidenceReport:
    """Compare reverse inclusion of layer point sets with the poset order."""
    ctx = ctx or space.context(n)
    poset = enumerate_poset(ctx)
    elems = poset.labels
    sets = [layer_points(space, n, e, colors) for e in elems]
    first = {}
    collisions = []
    for e, s in zip(elems, sets):
        if s in first:
            collisions.append((first[s], e))
        else:
            first[s] = e
    if collisions:
        return IncidenceReport("inconclusive", len(elems), collisions=collisions)
    mismatches = []
    for a, sa in zip(elems, sets):
        for b, sb in zip(elems, sets):
            if (sb <= sa) != leq(ctx, a, b):
                mismatches.append((a, b))
    return IncidenceReport("failed" if mismatches else "confirmed", len(elems), mismatches=mismatches)


def escalate_incidence(make_space, n: int, qs, ctx_for=None) -> tuple[int | None, IncidenceReport | None]:
    """Run ``verify_incidence`` on ``make_space(q)`` for increasing q until a
    report is not inconclusive.  Values of q the factory rejects are skipped.

    Returns the q used and its report, or ``(None, last report)`` if every q
    collided.
    """
    last = None
    for q in qs:
        try:
            space = make_space(q)
        except SpaceError:
            continue
        if space.size ** n > MAX_TUPLES:
            break
        last = verify_incidence(space, n, ctx_for(space) if ctx_for else None)
        if last.status != "inconclusive":
            return q, last
    return None, last


def removal_context(space: FiniteGSpace, n: int, removed) -> tuple[DowlingContext, tuple]:
    """Context for the layers of A^T(G, X): D^T(G, S) inside D_n(G, T u S).

    Returns the context and the X-point of each color.
    """
    T = set(removed)
    if not space.is_invariant(T):
        raise SpaceError("removed set T is not G-invariant")
    pts = tuple(sorted(T | set(space.singular)))
    action = space.restricted_action(pts)
    kept = [k for k, x in enumerate(pts) if x in T]
    return subposet_context(n, action, kept), pts


# -- fixture spaces ------------------------------------------------------------------

def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % k for k in range(2, int(q ** 0.5) + 1))


def primitive_root(q: int) -> int:
    if not _is_prime(q):
        raise SpaceError(f"q={q} must be prime")
    for g in range(1, q):
        if len({pow(g, k, q) for k in range(1, q)}) == q - 1:
            return g
    raise SpaceError("no primitive root")


def _roots_of_unity(q: int, d: int) -> list[int]:
    if (q - 1) % d:
        raise SpaceError(f"mu_{d} is not contained in F_{q}^* (need d | q-1)")
    zeta = pow(primitive_root(q), (q - 1) // d, q)
    return [pow(zeta, k, q) for k in range(d)]


def affine_line_scaling(q: int, d: int) -> FiniteGSpace:
    """F_q with mu_d acting by multiplication; S = {0}."""
    roots = _roots_of_unity(q, d)
    G = cyclic_group(d)
    act = [[(r * x) % q for x in range(q)] for r in roots]
    return FiniteGSpace(GSetAction(G, tuple(range(q)), act), name=f"A1(F{q}) with mu{d}")


def multiplicative_inversion(q: int) -> FiniteGSpace:
    """F_q^* with Z_2 acting by x -> 1/x; S = {1, -1}."""
    if not _is_prime(q):
        raise SpaceError(f"q={q} must be prime")
    pts = tuple(range(1, q))
    pos = {x: k for k, x in enumerate(pts)}
    G = cyclic_group(2)
    act = [list(range(q - 1)), [pos[pow(x, q - 2, q)] for x in pts]]
    return FiniteGSpace(GSetAction(G, pts, act), name=f"Gm(F{q}) with inversion")


def multiplicative_translation(q: int, d: int) -> FiniteGSpace:
    """F_q^* with mu_d acting by multiplication; the action is free."""
    roots = _roots_of_unity(q, d)
    pts = tuple(range(1, q))
    pos = {x: k for k, x in enumerate(pts)}
    G = cyclic_group(d)
    act = [[pos[(r * x) % q] for x in pts] for r in roots]
    return FiniteGSpace(GSetAction(G, pts, act), name=f"Gm(F{q}) with mu{d} translation")


def stabilizers_cyclic(space: FiniteGSpace) -> bool:
    G = space.group
    for x in range(space.size):
        stab = space.stabilizer(x)
        if not any(G.element_order(g) == len(stab) for g in stab):
            return False
    return True

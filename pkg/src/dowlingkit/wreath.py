"""The wreath product G wr S_n acting on D_n(G, S), and its orbits."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Sequence

from .dowling import DowlingContext, DowlingElement, canonicalize
from .groups import FiniteGroup
from .poset import RankedPoset


@dataclass(frozen=True)
class WreathElement:
    """``(g_1, ..., g_n; sigma)`` with ``sigma[j-1] = sigma(j)``.

    Products follow ``(g, s)(h, t) = ((g_{t(j)} h_j)_j, s t)``, which makes
    ``act`` a left action.
    """

    gs: tuple
    sigma: tuple

    def __post_init__(self):
        n = len(self.gs)
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError("sigma must be a permutation of 1..n")

    @property
    def n(self) -> int:
        return len(self.gs)


def wreath_identity(n: int, group: FiniteGroup) -> WreathElement:
    return WreathElement((group.identity,) * n, tuple(range(1, n + 1)))


def wreath_mul(group: FiniteGroup, w1: WreathElement, w2: WreathElement) -> WreathElement:
    t = group.table
    gs = tuple(t[w1.gs[w2.sigma[j] - 1]][w2.gs[j]] for j in range(w2.n))
    sigma = tuple(w1.sigma[w2.sigma[j] - 1] for j in range(w2.n))
    return WreathElement(gs, sigma)


def wreath_inverse(group: FiniteGroup, w: WreathElement) -> WreathElement:
    n = w.n
    tau = [0] * n
    for j, s in enumerate(w.sigma, start=1):
        tau[s - 1] = j
    gs = tuple(group.inverse[w.gs[tau[j] - 1]] for j in range(n))
    return WreathElement(gs, tuple(tau))


def wreath_generators(n: int, group: FiniteGroup) -> list[WreathElement]:
    """Each group generator inserted at each coordinate, plus adjacent transpositions."""
    e = group.identity
    ident = tuple(range(1, n + 1))
    gens = []
    for g in group.generators:
        for k in range(n):
            gs = [e] * n
            gs[k] = g
            gens.append(WreathElement(tuple(gs), ident))
    for k in range(1, n):
        s = list(ident)
        s[k - 1], s[k] = s[k], s[k - 1]
        gens.append(WreathElement((e,) * n, tuple(s)))
    return gens


def all_wreath_elements(n: int, group: FiniteGroup):
    from itertools import permutations
    for sigma in permutations(range(1, n + 1)):
        for gs in iproduct(range(group.order), repeat=n):
            yield WreathElement(gs, sigma)


def act(ctx: DowlingContext, w: WreathElement, e: DowlingElement) -> DowlingElement:
    """b'(sigma(j)) = g_j b(j) on blocks and z'(sigma(j)) = g_j . z(j) on the zero block."""
    t = ctx.group.table
    a = ctx.action.act
    sig, gs = w.sigma, w.gs
    blocks = [([sig[j - 1] for j in B], [t[gs[j - 1]][c] for j, c in zip(B, col)]) for B, col in e.blocks]
    zero = {sig[j - 1]: a[gs[j - 1]][s] for j, s in e.zero}
    return canonicalize(e.n, ctx.group, blocks, zero)


# -- labeled partitions --------------------------------------------------------------

@dataclass(frozen=True, order=True)
class LabeledPartition:
    """``unlabeled`` is weakly decreasing; ``labeled[o]`` is the part labeled by orbit o
    (zero when absent)."""

    unlabeled: tuple
    labeled: tuple

    @property
    def n(self) -> int:
        return sum(self.unlabeled) + sum(self.labeled)

    @property
    def length(self) -> int:
        return len(self.unlabeled)

    @property
    def rank(self) -> int:
        return self.n - len(self.unlabeled)

    def sort_key(self):
        return (self.rank, tuple(-x for x in self.unlabeled), self.labeled)

    def render(self, orbit_names: Sequence[str] | None = None) -> str:
        left = ",".join(map(str, self.unlabeled)) or "0"
        names = orbit_names or [str(o) for o in range(len(self.labeled))]
        lab = [f"{m}_{names[o]}" for o, m in enumerate(self.labeled) if m]
        return f"({left} || {', '.join(lab) or '0'})"

    def __str__(self):
        return self.render()


def orbit_label(ctx: DowlingContext, e: DowlingElement) -> LabeledPartition:
    od = ctx.orbits
    counts = [0] * len(od)
    for _, s in e.zero:
        counts[od.orbit_of[s]] += 1
    sizes = tuple(sorted((len(B) for B, _ in e.blocks), reverse=True))
    return LabeledPartition(sizes, tuple(counts))


def orbit_names(ctx: DowlingContext) -> list[str]:
    return [ctx.action.label(r) for r in ctx.orbits.reps]


def integer_partitions(n: int, largest: int | None = None):
    """Partitions of n as weakly decreasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - k, k):
            yield (k,) + rest


def labeled_partitions(n: int, n_orbits: int, forbidden_singleton_orbits=()) -> list[LabeledPartition]:
    forbidden = set(forbidden_singleton_orbits)
    out = []

    def fill(o, remaining, acc):
        if o == n_orbits:
            for p in integer_partitions(remaining):
                out.append(LabeledPartition(p, tuple(acc)))
            return
        for m in range(remaining + 1):
            if m == 1 and o in forbidden:
                continue
            fill(o + 1, remaining - m, acc + [m])

    fill(0, n, [])
    out.sort(key=LabeledPartition.sort_key)
    return out


def orbits_bruteforce(ctx: DowlingContext, poset: RankedPoset) -> list[list[int]]:
    """Orbits of the wreath product on ``poset`` by closure under generators."""
    gens = wreath_generators(ctx.n, ctx.group)
    labels = poset.labels
    index = {x: i for i, x in enumerate(labels)}
    orbit = [-1] * poset.n_elements
    out = []
    for start in range(poset.n_elements):
        if orbit[start] >= 0:
            continue
        k = len(out)
        orbit[start] = k
        members = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for w in gens:
                j = index[act(ctx, w, labels[i])]
                if orbit[j] < 0:
                    orbit[j] = k
                    members.append(j)
                    stack.append(j)
        out.append(sorted(members))
    return out


def orbit_fibers(ctx: DowlingContext, poset: RankedPoset) -> dict[LabeledPartition, list[int]]:
    fib: dict[LabeledPartition, list[int]] = {}
    for i, x in enumerate(poset.labels):
        fib.setdefault(orbit_label(ctx, x), []).append(i)
    return fib


def quotient_poset(ctx: DowlingContext, poset: RankedPoset) -> RankedPoset:
    """The orbit poset on labeled partitions: the image of the cover relation."""
    lab = [orbit_label(ctx, x) for x in poset.labels]
    nodes = sorted(set(lab), key=LabeledPartition.sort_key)
    pos = {x: i for i, x in enumerate(nodes)}
    covers = {(pos[lab[a]], pos[lab[b]]) for a, b in poset.covers}
    bottom = pos[lab[poset.bottom]]
    return RankedPoset(len(nodes), tuple(covers), tuple(x.rank for x in nodes), bottom, tuple(nodes))

"""Cross-validation of the closed forms against brute-force enumeration.

Each ``check_*`` function returns a :class:`CheckResult`; ``run_all`` runs
the full grid.  The CLI ``verify`` command and the acceptance tests both
use these.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable

from . import fixtures
from .dowling import (
    DowlingContext,
    DowlingPoset,
    dd_context,
    dowling_context,
    enumerate_poset,
    leq,
)
from .groups import cyclic_group, trivial_action
from .invariants import (
    char_poly_factored,
    dowling_homology_dim,
    euler_binomial_form,
    lower_interval_char_poly,
    motive_eval,
    rep_decomposition,
    whitney_hilbert,
)
from .layers import (
    SpaceError,
    affine_line_scaling,
    multiplicative_inversion,
    multiplicative_translation,
    orbit_config_count,
)
from .polynomial import IntPolynomial
from .poset import char_poly_bruteforce, interval, mobius_table, whitney_ranks
from .wreath import labeled_partitions, orbit_fibers, orbit_label, orbit_names, orbits_bruteforce, quotient_poset

DEFAULT_SEED = 20240601

HEXAGONAL_CHARPOLYS = {
    2: [72, -18, 1],
    3: [-1296, 396, -36, 1],
    4: [31104, -10800, 1260, -60, 1],
}
SQUARE_CHARPOLYS = {
    2: [32, -12, 1],
    3: [-384, 176, -24, 1],
    4: [6144, -3200, 560, -40, 1],
}

# Hasse diagrams of D_2(Z_2, {1, -1}), rank 1 -> rank 2; Z_2 = {e, g}
_ATOMS_PM = ["[2_e || 1_1]", "[1_e || 2_1]", "[1_e 2_e || ∅]", "[1_e 2_g || ∅]", "[1_e || 2_-1]", "[2_e || 1_-1]"]
_TOPS_PM = ["[∅ || 1_1 2_1]", "[∅ || 1_1 2_-1]", "[∅ || 1_-1 2_1]", "[∅ || 1_-1 2_-1]"]
HASSE_TRIVIAL_EDGES = [
    (0, 0), (1, 0), (2, 0), (3, 0),
    (5, 3), (4, 3), (3, 3), (2, 3),
    (5, 2), (1, 2),
    (4, 1), (0, 1),
]
HASSE_SIGN_EDGES = [
    (0, 0), (1, 0), (2, 0),
    (5, 3), (4, 3), (2, 3),
    (3, 1), (3, 2),
    (5, 2), (4, 1), (1, 2), (0, 1),
]
# atoms of the two lower intervals drawn inside the square poset; Z_4 = {e, g, g^2, g^3}, i = g
SQUARE_INTERVAL_ATOMS = {
    "[∅ || 1_z1 2_z2]": {"[2_e || 1_z1]", "[1_e || 2_z2]", "[1_e 2_g || ∅]", "[1_e 2_g^3 || ∅]"},
    "[∅ || 1_t 2_t]": {"[2_e || 1_t]", "[1_e || 2_t]", "[1_e 2_e || ∅]", "[1_e 2_g || ∅]",
                       "[1_e 2_g^2 || ∅]", "[1_e 2_g^3 || ∅]"},
}
# orbit quotient of the hexagonal poset for n = 2; orbits named e, z, w
HEXAGONAL_QUOTIENT_UPPER = {
    "(0 || 2_e)": {"(1 || 1_e)", "(2 || 0)"},
    "(0 || 2_z)": {"(1 || 1_z)", "(2 || 0)"},
    "(0 || 2_w)": {"(1 || 1_w)", "(2 || 0)"},
    "(0 || 1_e, 1_z)": {"(1 || 1_e)", "(1 || 1_z)"},
    "(0 || 1_e, 1_w)": {"(1 || 1_e)", "(1 || 1_w)"},
    "(0 || 1_z, 1_w)": {"(1 || 1_z)", "(1 || 1_w)"},
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0
    budget: float | None = None

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.seconds <= self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.within_budget

    def fail(self, msg: str):
        self.passed = False
        if len(self.failures) < 20:
            self.failures.append(msg)

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        budget = f" (budget {self.budget:g}s)" if self.budget is not None else ""
        line = f"{verdict} {self.name}: {self.checked} checks in {self.seconds:.2f}s{budget}"
        if self.failures:
            line += "; first failure: " + self.failures[0]
        elif not self.within_budget:
            line += "; over time budget"
        return line

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.ok, "checked": self.checked,
                "seconds": round(self.seconds, 3), "budget": self.budget, "failures": self.failures}


def _timed(name: str, budget: float | None = None):
    def wrap(fn: Callable[..., None]):
        def run(*args, **kwargs) -> CheckResult:
            res = CheckResult(name, True, budget=budget)
            t0 = time.perf_counter()
            fn(res, *args, **kwargs)
            res.seconds = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


class GridCache:
    """Enumerated posets and Mobius tables shared between checks."""

    def __init__(self, max_n: int = 4):
        self.max_n = max_n
        self.actions = fixtures.grid_actions()
        self._posets: dict = {}

    def get(self, label: str, n: int) -> tuple[DowlingContext, DowlingPoset, list]:
        key = (label, n)
        if key not in self._posets:
            action = dict(self.actions)[label]
            ctx = dowling_context(n, action)
            P = enumerate_poset(ctx)
            self._posets[key] = (ctx, P, mobius_table(P))
        return self._posets[key]

    def instances(self, max_n: int | None = None):
        top = self.max_n if max_n is None else max_n
        for label, _ in self.actions:
            for n in range(1, top + 1):
                yield (label, n) + self.get(label, n)


def _ambient(ctx: DowlingContext) -> int:
    return ctx.n if ctx.action.size else ctx.n - 1


def _rank_sizes(P) -> list[int]:
    return list(P.rank_sizes())


@_timed("1 hexagonal and square char polys", budget=4.0)
def check_example_charpolys(res: CheckResult):
    for action, table in ((fixtures.hexagonal_action(), HEXAGONAL_CHARPOLYS),
                          (fixtures.square_action(), SQUARE_CHARPOLYS)):
        for n, coeffs in table.items():
            t0 = time.perf_counter()
            ctx = dowling_context(n, action)
            P = enumerate_poset(ctx)
            brute = char_poly_bruteforce(P, n)
            closed = char_poly_factored(n, action.group.order, action.size)
            expect = IntPolynomial(coeffs)
            res.checked += 1
            if brute != expect or closed != expect:
                res.fail(f"n={n} |S|={action.size}: brute {brute}, closed {closed}, expected {expect}")
            if time.perf_counter() - t0 > 1.0:
                res.fail(f"n={n} |S|={action.size} took over 1s")


@_timed("2 oracle grid char polys", budget=60.0)
def check_oracle_grid(res: CheckResult, cache: GridCache):
    for label, n, ctx, P, mu in cache.instances():
        brute = char_poly_bruteforce(P, _ambient(ctx), mu)
        closed = char_poly_factored(n, ctx.group.order, ctx.action.size)
        res.checked += 1
        if brute != closed:
            res.fail(f"{label} n={n}: brute {brute} != closed {closed}")


def _edge_set(ctx, P, atoms, tops, edges):
    idx = {P.labels[i]: i for i in range(P.n_elements)}
    a = [idx[ctx.parse(x)] for x in atoms]
    t = [idx[ctx.parse(x)] for x in tops]
    return {(a[i], t[j]) for i, j in edges}


@_timed("3 Hasse diagram regressions")
def check_hasse_diagrams(res: CheckResult):
    G = cyclic_group(2)
    for action, edges in ((trivial_action(G, ("1", "-1")), HASSE_TRIVIAL_EDGES),
                          (fixtures.sign_action(), HASSE_SIGN_EDGES)):
        ctx = dowling_context(2, action)
        P = enumerate_poset(ctx)
        res.checked += 1
        if P.n_elements != 11 or _rank_sizes(P) != [1, 6, 4]:
            res.fail(f"{P.n_elements} elements with ranks {_rank_sizes(P)}")
            continue
        expected = {(P.bottom, a) for a in P.atoms()}
        expected |= _edge_set(ctx, P, _ATOMS_PM, _TOPS_PM, edges)
        if set(P.covers) != expected:
            res.fail(f"cover set differs from the expected diagram for {action.points}")
    P = enumerate_poset(dowling_context(2, fixtures.hexagonal_action()))
    maxes = P.maximal_elements()
    res.checked += 1
    if len(maxes) != 36 or any(P.rank[m] != 2 for m in maxes):
        res.fail(f"hexagonal D_2 has {len(maxes)} maximal elements")


@_timed("4 covering counts")
def check_cover_counts(res: CheckResult, cache: GridCache, seed: int = DEFAULT_SEED, samples: int = 200):
    rng = random.Random(seed)
    pool = []
    for label, n, ctx, P, _ in cache.instances():
        s, g = ctx.action.size, ctx.group.order
        for x in range(P.n_elements):
            ell = len(P.labels[x].blocks)
            res.checked += 1
            if len(P.upper_covers[x]) != ell * s + comb(ell, 2) * g:
                res.fail(f"{label} n={n} {ctx.render(P.labels[x])}: {len(P.upper_covers[x])} covers")
        if n <= 3:
            # independent count: rank-adjacent comparabilities under leq
            for x in range(P.n_elements):
                _leq_cover_count(res, label, ctx, P, x)
        else:
            pool.extend((label, ctx, P, x) for x in range(P.n_elements))
    for label, ctx, P, x in rng.sample(pool, min(samples, len(pool))):
        _leq_cover_count(res, label, ctx, P, x)


def _leq_cover_count(res, label, ctx, P, x):
    e = P.labels[x]
    above = [y for y in range(P.n_elements) if P.rank[y] == P.rank[x] + 1 and leq(ctx, e, P.labels[y])]
    ell = len(e.blocks)
    res.checked += 1
    if len(above) != ell * ctx.action.size + comb(ell, 2) * ctx.group.order:
        res.fail(f"{label} n={ctx.n} {ctx.render(e)}: {len(above)} elements cover it under leq")


@_timed("5 wreath orbits vs labeled partitions")
def check_orbits(res: CheckResult, cache: GridCache):
    for label, n, ctx, P, _ in cache.instances(max_n=3):
        orbits = {frozenset(o) for o in orbits_bruteforce(ctx, P)}
        fibers = {frozenset(f) for f in orbit_fibers(ctx, P).values()}
        labels = set(labeled_partitions(n, len(ctx.orbits)))
        res.checked += 1
        if orbits != fibers:
            res.fail(f"{label} n={n}: wreath orbits differ from label fibers")
        if set(orbit_label(ctx, x) for x in P.labels) != labels:
            res.fail(f"{label} n={n}: labels are not onto labeled partitions")
    for label, want in (("Z2/trivial2", 7), ("Z6/hexagonal", 11)):
        ctx, P, _ = cache.get(label, 2)
        got = len(orbits_bruteforce(ctx, P))
        res.checked += 1
        if got != want:
            res.fail(f"{label} n=2 has {got} orbits, expected {want}")
    ctx, P, _ = cache.get("Z6/hexagonal", 2)
    Q = quotient_poset(ctx, P)
    names = [nm[0] for nm in orbit_names(ctx)]
    upper = {}
    for a, b in Q.covers:
        if Q.rank[b] == 2:
            upper.setdefault(Q.labels[b].render(names), set()).add(Q.labels[a].render(names))
    res.checked += 1
    if upper != HEXAGONAL_QUOTIENT_UPPER:
        res.fail(f"hexagonal quotient rank-2 covers differ: {upper}")


@_timed("6 interval decomposition")
def check_intervals(res: CheckResult, cache: GridCache, full_interval_max_n: int = 3):
    for label, n, ctx, P, mu in cache.instances():
        down = P.down_sets
        for x in range(P.n_elements):
            e = P.labels[x]
            # mu of [0, e] is the restriction of the global mu
            coeffs = [0] * (e.rank + 1)
            d = down[x]
            for y in range(P.n_elements):
                if (d >> y) & 1:
                    coeffs[e.rank - P.rank[y]] += mu[y]
            brute = IntPolynomial(coeffs)
            if n <= full_interval_max_n:
                I = interval(P, P.bottom, x)
                again = char_poly_bruteforce(I, I.max_rank)
                if again != brute:
                    res.fail(f"{label} n={n} {ctx.render(e)}: interval extraction disagrees")
            closed = lower_interval_char_poly(ctx, e)
            res.checked += 1
            if brute != closed:
                res.fail(f"{label} n={n} {ctx.render(e)}: brute {brute} != product {closed}")
    ctx = dowling_context(2, fixtures.square_action())
    P = enumerate_poset(ctx)
    for top, lattice_group in (("[∅ || 1_z1 2_z2]", 2), ("[∅ || 1_t 2_t]", 4)):
        x = P.index_of(ctx.parse(top))
        I = interval(P, P.bottom, x)
        D = enumerate_poset(dowling_context(2, trivial_action(cyclic_group(lattice_group), ("0",))))
        atoms = {ctx.render(I.labels[a]) for a in I.atoms()}
        res.checked += 1
        if _rank_sizes(I) != _rank_sizes(D):
            res.fail(f"interval below {top}: ranks {_rank_sizes(I)} vs D_2(Z{lattice_group}) {_rank_sizes(D)}")
        if atoms != SQUARE_INTERVAL_ATOMS[top]:
            res.fail(f"interval below {top}: atoms {sorted(atoms)}")


@_timed("7 Whitney numbers and representations")
def check_whitney(res: CheckResult, cache: GridCache):
    for label, n, ctx, P, mu in cache.instances():
        s = ctx.action.size
        if s == 0:
            continue
        ranks = whitney_ranks(P, mu)
        hilb = whitney_hilbert(n, ctx.group.order, s)
        for r in range(n + 1):
            res.checked += 1
            if hilb[r] != ranks.get(r, 0):
                res.fail(f"{label} n={n} r={r}: closed {hilb[r]} vs |mu| sum {ranks.get(r, 0)}")
            reps = sum(x.induced_dim for x in rep_decomposition(ctx, r))
            if reps != hilb[r]:
                res.fail(f"{label} n={n} r={r}: representation dimensions sum to {reps}, expected {hilb[r]}")
    for d in range(1, 7):
        action = trivial_action(cyclic_group(d), ("0",))
        for n in range(1, 5):
            ctx = dowling_context(n, action)
            P = enumerate_poset(ctx)
            mu = mobius_table(P)
            (top,) = P.maximal_elements()
            res.checked += 1
            if abs(mu[top]) != dowling_homology_dim(n, d):
                res.fail(f"D_{n}(Z{d}): |mu(top)| = {abs(mu[top])}, expected {dowling_homology_dim(n, d)}")


def finite_field_cases():
    cases = []
    for d in (2, 3):
        for q in (5, 7, 13):
            try:
                cases.append((f"affine q={q} d={d}", affine_line_scaling(q, d)))
            except SpaceError:
                continue
    for q in (7, 11, 13):
        cases.append((f"gm inversion q={q}", multiplicative_inversion(q)))
    for q, d in ((7, 2), (7, 3), (13, 2), (13, 3)):
        cases.append((f"gm translation q={q} d={d}", multiplicative_translation(q, d)))
    return cases


@_timed("8 finite-field point counts", budget=10.0)
def check_point_counts(res: CheckResult):
    for name, space in finite_field_cases():
        for n in range(1, 4):
            brute = orbit_config_count(space, n)
            formula = motive_eval(space.size, n, space.group.order, len(space.singular))
            res.checked += 1
            if brute != formula:
                res.fail(f"{name} n={n}: brute {brute} vs formula {formula}")
    got = orbit_config_count(multiplicative_inversion(7), 2)
    res.checked += 1
    if got != 8:
        res.fail(f"q=7 inversion n=2 gives {got}, expected 8")


@_timed("9 Euler characteristic identities")
def check_euler(res: CheckResult, seed: int = DEFAULT_SEED):
    for n in range(0, 7):
        table = [
            ((2, 2), (-2) ** n * factorial(n)),
            ((2, 4), (-2) ** n * factorial(n + 1)),
            ((6, 6), (-6) ** n * factorial(n)),
            ((4, 4), (-4) ** n * factorial(n)),
        ]
        for (g, s), want in table:
            res.checked += 1
            if motive_eval(0, n, g, s) != want:
                res.fail(f"n={n} |G|={g} |S|={s}: {motive_eval(0, n, g, s)} != {want}")
    rng = random.Random(seed)
    for _ in range(100):
        xc, n, g, s = rng.randint(-20, 20), rng.randint(0, 6), rng.randint(1, 6), rng.randint(0, 8)
        res.checked += 1
        if euler_binomial_form(xc, n, g, s) != motive_eval(xc, n, g, s):
            res.fail(f"binomial form differs at xc={xc} n={n} |G|={g} |S|={s}")


@_timed("10 subposet DD_n(Z2)")
def check_subposet(res: CheckResult):
    G = cyclic_group(2)
    for n in range(1, 5):
        P = enumerate_poset(dd_context(n, G))
        res.checked += 1
        if len(P.atoms()) != n * (n - 1):
            res.fail(f"DD_{n}(Z2) has {len(P.atoms())} atoms")
    P = enumerate_poset(dd_context(3, G))
    chi = char_poly_bruteforce(P, 3)
    res.checked += 1
    if chi != IntPolynomial.linear_product([1, 2, 3]):
        res.fail(f"DD_3(Z2) char poly is {chi}")


def run_all(seed: int = DEFAULT_SEED, max_n: int = 4) -> list[CheckResult]:
    cache = GridCache(max_n)
    results = [check_example_charpolys()]
    t0 = time.perf_counter()
    grid = check_oracle_grid(cache)
    # enumeration happens inside the grid check, so time it as a whole
    grid.seconds = time.perf_counter() - t0
    results.append(grid)
    results += [
        check_hasse_diagrams(),
        check_cover_counts(cache, seed=seed),
        check_orbits(cache),
        check_intervals(cache),
        check_whitney(cache),
        check_point_counts(),
        check_euler(seed=seed),
        check_subposet(),
    ]
    return results

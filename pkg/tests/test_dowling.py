import json
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dowlingkit import fixtures
from dowlingkit.dowling import (
    DisjointUnion,
    EnumerationCapError,
    EquivariantMap,
    Homomorphism,
    Injection,
    MalformedElementError,
    MorphismError,
    OrderError,
    apply_functorial,
    canonicalize,
    covers_down,
    covers_up,
    dd_context,
    dowling_context,
    element_from_json,
    element_to_json,
    enumerate_poset,
    interval_factors,
    leq,
    lower_decompose,
    parse_element,
    subposet_context,
    upper_label,
)
from dowlingkit.groups import cyclic_group, trivial_action

SMALL = [
    ("Z2", "trivial2", 2), ("Z2", "sign", 3), ("Z3", "regular+point", 2),
    ("Z4", "square", 2), ("Z6", "hexagonal", 2), ("Z1", "empty", 3), ("Z2", "point", 3),
]


# -- normal form ------------------------------------------------------------------------

def test_canonical_form_normalizes_colorings():
    G = cyclic_group(4)
    e = canonicalize(3, G, [([3, 1], [2, 1])], {2: 0})
    assert e.blocks == (((1, 3), (0, 1)),)
    assert e.zero == ((2, 0),)
    assert e.rank == 2


@settings(max_examples=60)
@given(st.data())
def test_right_multiplication_is_invisible(data):
    G = cyclic_group(data.draw(st.sampled_from([2, 3, 4, 6])))
    n = data.draw(st.integers(1, 5))
    labels = data.draw(st.lists(st.integers(0, n), min_size=n, max_size=n))
    cols = data.draw(st.lists(st.integers(0, G.order - 1), min_size=n, max_size=n))
    shift = data.draw(st.integers(0, G.order - 1))
    blocks = {}
    for i, (lab, g) in enumerate(zip(labels, cols), start=1):
        if lab:
            blocks.setdefault(lab, {})[i] = g
    zero = {i: 0 for i, lab in enumerate(labels, start=1) if lab == 0}
    e = canonicalize(n, G, list(blocks.values()), zero)
    shifted = [{i: G.mul(g, shift) for i, g in b.items()} for b in blocks.values()]
    assert canonicalize(n, G, shifted, zero) == e
    for B, c in e.blocks:
        assert c[0] == G.identity and list(B) == sorted(B)
    assert e.rank == n - len(blocks)


@pytest.mark.parametrize("blocks, zero", [
    ([([1, 2], [0, 0]), ([2, 3], [0, 0])], {}),  # overlap
    ([([1, 4], [0, 0])], {2: 0, 3: 0}),  # index out of range
    ([([1, 2], [0, 0])], {}),  # index 3 missing
    ([([], [])], {1: 0, 2: 0, 3: 0}),  # empty block
    ([([1, 2], [0])], {3: 0}),  # coloring not total
    ([([1], [0])], {1: 0, 2: 0, 3: 0}),  # index both in a block and colored
])
def test_malformed_elements(blocks, zero):
    with pytest.raises(MalformedElementError):
        canonicalize(3, cyclic_group(2), blocks, zero)


def test_context_checks_colors():
    ctx = dowling_context(2, fixtures.sign_action())
    with pytest.raises(MalformedElementError):
        ctx.canonicalize([], {1: 0, 2: 5})


# -- covering relations and order --------------------------------------------------------

@pytest.mark.parametrize("group, action, n", SMALL)
def test_covers_up_and_down_are_inverse(poset_factory, group, action, n):
    ctx, P = poset_factory(group, action, n)
    ups = {x: set(covers_up(ctx, x)) for x in P.labels}
    for y in P.labels:
        downs = set(covers_down(ctx, y))
        assert downs == {x for x in P.labels if y in ups[x]}


@pytest.mark.parametrize("group, action, n", SMALL)
def test_cover_count_law(poset_factory, group, action, n):
    ctx, P = poset_factory(group, action, n)
    s, g = ctx.action.size, ctx.group.order
    for x in P.labels:
        ell = len(x.blocks)
        assert len(covers_up(ctx, x)) == ell * s + comb(ell, 2) * g
        assert all(y.rank == x.rank + 1 for y in covers_up(ctx, x))


@pytest.mark.parametrize("group, action, n", SMALL)
def test_leq_matches_reachability(poset_factory, group, action, n):
    ctx, P = poset_factory(group, action, n)
    for i, a in enumerate(P.labels):
        for j, b in enumerate(P.labels):
            assert leq(ctx, a, b) == P.leq(i, j)


def test_leq_rejects_mismatched_n():
    G = cyclic_group(2)
    ctx = dowling_context(2, trivial_action(G, ["0"]))
    with pytest.raises(ValueError):
        leq(ctx, ctx.bottom(), dowling_context(3, ctx.action).bottom())


def test_bottom_and_top():
    ctx, P = fixtures_poset("Z3", "point", 3)
    assert P.labels[P.bottom] == ctx.bottom()
    (top,) = P.maximal_elements()
    assert P.labels[top].blocks == () and P.labels[top].rank == 3


def fixtures_poset(group, action, n):
    G = fixtures.group_by_name(group)
    ctx = dowling_context(n, fixtures.action_by_name(action, G))
    return ctx, enumerate_poset(ctx)


def test_sign_action_covers():
    ctx, P = fixtures_poset("Z2", "sign", 2)
    top = P.index_of(ctx.parse("[∅ || 1_1 2_1]"))
    below = {ctx.render(P.labels[x]) for x in P.lower_covers[top]}
    assert below == {"[2_e || 1_1]", "[1_e || 2_1]", "[1_e 2_e || ∅]"}
    mixed = P.index_of(ctx.parse("[∅ || 1_1 2_-1]"))
    below = {ctx.render(P.labels[x]) for x in P.lower_covers[mixed]}
    assert below == {"[2_e || 1_1]", "[1_e || 2_-1]", "[1_e 2_g || ∅]"}


# -- subposets ---------------------------------------------------------------------------

@pytest.mark.parametrize("n, d", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_filtered_enumeration_equals_filtered_full_poset(n, d):
    G = cyclic_group(d)
    sub = enumerate_poset(dd_context(n, G))
    full_ctx = dowling_context(n, trivial_action(G, ("0",)))
    full = enumerate_poset(full_ctx)
    ctx = dd_context(n, G)
    kept = [x for x in full.labels if ctx.retained(x)]
    assert set(sub.labels) == set(kept)
    expected = {(a, b) for a in kept for b in kept if b.rank == a.rank + 1 and leq(full_ctx, a, b)}
    assert {(sub.labels[a], sub.labels[b]) for a, b in sub.covers} == expected


def test_dd_has_no_singleton_zero_blocks():
    P = enumerate_poset(dd_context(3, cyclic_group(2)))
    assert all(len(x.zero) != 1 for x in P.labels)
    assert len(P.atoms()) == 6


def test_subposet_requires_invariant_set():
    with pytest.raises(ValueError):
        subposet_context(2, fixtures.sign_action(), [0])
    ctx = subposet_context(2, fixtures.square_action(), [1, 2])
    assert ctx.is_filtered and ctx.forbidden_orbits == frozenset({0, 2})


# -- enumeration cap ---------------------------------------------------------------------

def test_cap(monkeypatch):
    ctx = dowling_context(3, fixtures.hexagonal_action())
    with pytest.raises(EnumerationCapError):
        enumerate_poset(ctx, cap=50)
    monkeypatch.setenv("DOWLINGKIT_CAP", "50")
    with pytest.raises(EnumerationCapError):
        enumerate_poset(ctx)
    monkeypatch.setenv("DOWLINGKIT_CAP", "100000")
    assert enumerate_poset(ctx).n_elements == 505


# -- local structure ---------------------------------------------------------------------

def test_interval_factors_hexagonal():
    ctx = dowling_context(4, fixtures.hexagonal_action())
    e = ctx.parse("[1_e | ∅ || 2_z1 3_z2 4_e]")
    kinds = sorted((f.kind, f.size, f.group_order) for f in interval_factors(ctx, e))
    assert kinds == [("Dowling", 1, 6), ("Dowling", 2, 2), ("Partition", 1, 1)]


def _refines(p, q):
    return all(any(set(A) <= set(B) for B in q) for A in p)


@pytest.mark.parametrize("group, action, n", [("Z4", "square", 2), ("Z6", "hexagonal", 2),
                                              ("Z4", "square", 3), ("Z2", "regular+point", 3)])
def test_lower_interval_isomorphism(poset_factory, group, action, n):
    ctx, P = poset_factory(group, action, n)
    od = ctx.orbits
    G = ctx.group
    for x in range(P.n_elements):
        beta = P.labels[x]
        below = [P.labels[y] for y in range(P.n_elements) if P.leq(y, x)]
        images = {a: lower_decompose(ctx, beta, a) for a in below}
        # bijective onto the product of partition and Dowling lattices
        assert len(set(map(_freeze, images.values()))) == len(below)
        size = 1
        for f in interval_factors(ctx, beta):
            if f.kind == "Partition":
                size *= bell(f.size)
            else:
                sub = trivial_action(G.subgroup(f.subgroup), ("0",))
                size *= enumerate_poset(dowling_context(f.size, sub)).n_elements
        assert size == len(below)
        sub_ctx = {o: dowling_context(len(z_of(beta, od, o)), trivial_action(G.subgroup(od.stabilizers[o]), ("0",)))
                   for o in images[beta][1]}
        for a1 in below:
            for a2 in below:
                p1, d1 = images[a1]
                p2, d2 = images[a2]
                componentwise = all(_refines(u, v) for u, v in zip(p1, p2)) and all(
                    leq(sub_ctx[o], d1[o], d2[o]) for o in d1)
                assert leq(ctx, a1, a2) == componentwise


def z_of(beta, od, o):
    return [i for i, s in beta.zero if od.orbit_of[s] == o]


def _freeze(img):
    parts, dows = img
    return parts, tuple(sorted(dows.items()))


def bell(m):
    row = [1]
    for _ in range(m - 1):
        new = [row[-1]]
        for v in row:
            new.append(new[-1] + v)
        row = new
    return row[-1]


@pytest.mark.parametrize("group, action, n", [("Z4", "square", 2), ("Z2", "sign", 3), ("Z3", "regular+point", 2)])
def test_upper_interval_isomorphism(poset_factory, group, action, n):
    ctx, P = poset_factory(group, action, n)
    for a in P.labels:
        if a.rank > 1:
            continue
        ell = len(a.blocks)
        target_ctx = dowling_context(ell, ctx.action)
        target = enumerate_poset(target_ctx)
        above = [b for b in P.labels if leq(ctx, a, b)]
        images = {b: upper_label(ctx, a, b) for b in above}
        assert set(images.values()) == set(target.labels)
        assert len(above) == target.n_elements
        for b1 in above:
            for b2 in above:
                assert leq(ctx, b1, b2) == leq(target_ctx, images[b1], images[b2])


def test_upper_label_and_decompose_require_order():
    ctx, P = fixtures_poset("Z2", "sign", 2)
    a = ctx.parse("[1_e 2_e || ∅]")
    b = ctx.parse("[∅ || 1_1 2_-1]")
    with pytest.raises(OrderError):
        upper_label(ctx, a, b)
    with pytest.raises(OrderError):
        lower_decompose(ctx, a, b)


# -- functoriality ------------------------------------------------------------------------

def _order_preserving(ctx_src, ctx_dst, P, f):
    for a in P.labels:
        for b in P.labels:
            if leq(ctx_src, a, b):
                assert leq(ctx_dst, f(a), f(b))


def test_disjoint_union_and_injection():
    ctx, P = fixtures_poset("Z2", "sign", 2)
    c = ctx.parse("[1_e 2_g || ∅]")
    big = dowling_context(4, ctx.action)
    _order_preserving(ctx, big, P, lambda x: apply_functorial(x, DisjointUnion(c)))
    inj = Injection((3, 1), 3, ctx.group)
    three = dowling_context(3, ctx.action)
    _order_preserving(ctx, three, P, lambda x: apply_functorial(x, inj))
    assert apply_functorial(ctx.bottom(), inj) == three.bottom()
    assert ctx.render(apply_functorial(ctx.parse("[1_e 2_g || ∅]"), inj)) == "[1_e 3_g | 2_e || ∅]"
    with pytest.raises(MorphismError):
        apply_functorial(ctx.bottom(), Injection((1, 1), 3, ctx.group))


def test_equivariant_map_and_homomorphism():
    ctx, P = fixtures_poset("Z2", "sign", 2)
    point = trivial_action(ctx.group, ["*"])
    f = EquivariantMap((0, 0), ctx.action, point)
    _order_preserving(ctx, dowling_context(2, point), P, lambda x: apply_functorial(x, f))
    with pytest.raises(MorphismError):
        apply_functorial(ctx.bottom(), EquivariantMap((0,), point, ctx.action))
    Z4, Z2 = cyclic_group(4), cyclic_group(2)
    src = dowling_context(2, trivial_action(Z4, ("1", "-1")))
    dst = dowling_context(2, trivial_action(Z2, ("1", "-1")))
    P4 = enumerate_poset(src)
    hom = Homomorphism((0, 1, 0, 1), Z4, Z2)
    _order_preserving(src, dst, P4, lambda x: apply_functorial(x, hom))
    with pytest.raises(MorphismError):
        apply_functorial(src.bottom(), Homomorphism((0, 1, 1, 0), Z4, Z2))


# -- text and JSON ------------------------------------------------------------------------

@pytest.mark.parametrize("group, action, n", SMALL)
def test_render_parse_roundtrip(poset_factory, group, action, n):
    ctx, P = poset_factory(group, action, n)
    for x in P.labels:
        assert ctx.parse(ctx.render(x)) == x
        data = json.loads(json.dumps(element_to_json(x, ctx.group, ctx.action)))
        assert element_from_json(data, ctx.group, ctx.action) == x


def test_parse_accepts_uncolored_entries():
    ctx = dowling_context(3, fixtures.hexagonal_action())
    assert ctx.parse("[1 3_g^2 | 2 || ∅]") == ctx.parse("[1_e 3_g^2 | 2_e || ∅]")
    e = parse_element("[∅ || 1_z1 2_w2]", ctx.group, ctx.action)
    assert e.n == 2


@pytest.mark.parametrize("text", ["1_e 2_e", "[1_q || ∅]", "[1_e || 2]", "[1_e | 1_e || ∅]", "[x_e || ∅]",
                                  "[1_e || 2_nowhere]"])
def test_parse_errors(text):
    ctx = dowling_context(2, fixtures.sign_action())
    with pytest.raises(MalformedElementError):
        ctx.parse(text)


def test_element_json_errors():
    ctx = dowling_context(2, fixtures.sign_action())
    with pytest.raises(MalformedElementError):
        element_from_json({"n": 2, "blocks": []}, ctx.group, ctx.action)

import json
from math import gcd

import pytest
from hypothesis import given, strategies as st

from dowlingkit.groups import (
    FiniteGroup,
    GSetAction,
    GroupError,
    action_from_generator,
    action_from_json,
    cyclic_group,
    disjoint_union,
    empty_action,
    is_equivariant,
    regular_action,
    trivial_action,
    trivial_group,
)
from dowlingkit.fixtures import hexagonal_action, sign_action, square_action


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6, 12])
def test_cyclic_group_orders(d):
    G = cyclic_group(d)
    assert G.order == d
    assert sorted(G.element_order(g) for g in range(d)) == sorted(d // gcd(d, k) for k in range(d))
    assert G.label(G.identity) == "e"


def test_cyclic_group_rejects_nonpositive():
    with pytest.raises(GroupError):
        cyclic_group(0)


def test_trivial_group():
    G = trivial_group()
    assert G.order == 1 and G.generators == ()


@given(st.integers(1, 9), st.data())
def test_cyclic_group_axioms(d, data):
    G = cyclic_group(d)
    a, b, c = (data.draw(st.integers(0, d - 1)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == G.identity
    assert G.power(a, G.element_order(a)) == G.identity


@given(st.integers(1, 12))
def test_generators_generate(d):
    G = cyclic_group(d)
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        x = frontier.pop()
        for g in G.generators:
            y = G.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    assert len(seen) == d


def test_group_validation():
    with pytest.raises(GroupError):
        FiniteGroup(("a", "b"), [[0, 0], [0, 0]])  # not a group
    with pytest.raises(GroupError):
        FiniteGroup(("a", "b", "c"), [[0, 1, 2], [1, 2, 0], [2, 1, 0]])  # not associative / no inverses
    with pytest.raises(GroupError):
        FiniteGroup(("a",), [[0, 0]])


def test_subgroup_and_homomorphism():
    Z4, Z2 = cyclic_group(4), cyclic_group(2)
    assert Z4.is_subgroup([0, 2])
    assert not Z4.is_subgroup([0, 1])
    H = Z4.subgroup([0, 2])
    assert H.order == 2 and H.element_order(1) == 2
    assert Z4.is_homomorphism(Z2, [0, 1, 0, 1])
    assert not Z4.is_homomorphism(Z2, [0, 1, 1, 0])


def test_index_by_label():
    G = cyclic_group(4)
    assert G.index("g^2") == 2
    with pytest.raises(GroupError):
        G.index("h")


def test_hexagonal_orbits():
    od = hexagonal_action().orbit_data
    assert [len(o) for o in od.orbits] == [1, 3, 2]
    assert [len(s) for s in od.stabilizers] == [6, 2, 3]


@pytest.mark.parametrize("action", [hexagonal_action(), square_action(), sign_action(),
                                    regular_action(cyclic_group(5)),
                                    disjoint_union(regular_action(cyclic_group(3)), trivial_action(cyclic_group(3), ["p"]))])
def test_orbit_data_consistent(action):
    od = action.orbit_data
    assert sorted(x for o in od.orbits for x in o) == list(range(action.size))
    for k, orb in enumerate(od.orbits):
        assert od.reps[k] == min(orb)
        assert len(orb) * len(od.stabilizers[k]) == action.group.order
        for s in orb:
            assert od.orbit_of[s] == k
            assert action.act[od.transporter[s]][od.reps[k]] == s
        for h in od.stabilizers[k]:
            assert action.act[h][od.reps[k]] == od.reps[k]


def test_action_validation():
    G = cyclic_group(2)
    with pytest.raises(GroupError):
        GSetAction(G, ("a", "b"), [[1, 0], [1, 0]])  # identity moves points
    with pytest.raises(GroupError):
        GSetAction(G, ("a", "a"), [[0, 1], [1, 0]])
    with pytest.raises(GroupError):
        action_from_generator(cyclic_group(3), ("a", "b"), [1, 0])  # g^3 != e


def test_action_json_roundtrip():
    a = square_action()
    b = action_from_json(json.loads(json.dumps(a.to_json())))
    assert b.points == a.points and b.act == a.act
    with pytest.raises(GroupError):
        action_from_json({"points": []})


def test_equivariance():
    Z2 = cyclic_group(2)
    src, dst = sign_action(), trivial_action(Z2, ["*"])
    assert is_equivariant(src, dst, [0, 0])
    assert not is_equivariant(dst, src, [0])
    assert empty_action(Z2).size == 0

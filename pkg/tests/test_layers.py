import random

import pytest

from dowlingkit.dowling import dowling_context, enumerate_poset, leq
from dowlingkit.groups import trivial_action
from dowlingkit.invariants import motive_eval, motive_from_poset
from dowlingkit.layers import (
    SpaceError,
    affine_line_scaling,
    defining_equations,
    layer_parametrization,
    layer_points,
    max_layer_at,
    multiplicative_inversion,
    multiplicative_translation,
    orbit_config_count,
    primitive_root,
    removal_context,
    stabilizers_cyclic,
    verify_incidence,
)


def test_fixture_spaces():
    A = affine_line_scaling(7, 3)
    assert A.singular == (0,) and stabilizers_cyclic(A)
    M = multiplicative_inversion(11)
    assert [M.points[x] for x in M.singular] == [1, 10]
    T = multiplicative_translation(13, 3)
    assert T.singular == ()
    assert primitive_root(7) == 3


def test_fixture_errors():
    with pytest.raises(SpaceError):
        affine_line_scaling(5, 3)
    with pytest.raises(SpaceError):
        multiplicative_inversion(9)


def test_defining_equations():
    ctx = affine_line_scaling(5, 2).context(3)
    e = ctx.parse("[1_e 2_g || 3_0]")
    eqs = defining_equations(ctx.group, e)
    assert sorted(eqs.diagonal_eqs) == [(1, 2, 1), (2, 1, 1)]
    assert eqs.point_eqs == ((3, 0),)


@pytest.mark.parametrize("space", [affine_line_scaling(5, 2), affine_line_scaling(7, 3), multiplicative_inversion(7)])
@pytest.mark.parametrize("n", [1, 2])
def test_layers_match_parametrization(space, n):
    P = enumerate_poset(space.context(n))
    for e in P.labels:
        pts = layer_points(space, n, e)
        assert pts == layer_parametrization(space, e)
        assert len(pts) == space.size ** len(e.blocks)


@pytest.mark.parametrize("space", [affine_line_scaling(7, 2), affine_line_scaling(7, 3), multiplicative_inversion(7)])
def test_incidence_confirmed(space):
    report = verify_incidence(space, 2)
    assert report.status == "confirmed", report.to_json()


def test_incidence_reports_collisions():
    # two colors sent to the same point give equal layers, so the comparison is inconclusive
    space = affine_line_scaling(5, 2)
    ctx = dowling_context(2, trivial_action(space.group, ("a", "b")))
    report = verify_incidence(space, 2, ctx=ctx, colors=(0, 0))
    assert report.status == "inconclusive" and not report.confirmed
    assert report.collisions


@pytest.mark.parametrize("space", [affine_line_scaling(7, 2), multiplicative_inversion(11)])
def test_max_layer(space):
    n = 3
    ctx = space.context(n)
    P = enumerate_poset(ctx)
    rng = random.Random(3)
    for _ in range(40):
        p = tuple(rng.randrange(space.size) for _ in range(n))
        top = max_layer_at(space, n, p)
        assert p in layer_points(space, n, top)
        for e in P.labels:
            if p in layer_points(space, n, e):
                assert leq(ctx, e, top)


@pytest.mark.parametrize("space", [affine_line_scaling(13, 3), multiplicative_inversion(13),
                                   multiplicative_translation(13, 2)])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_counts_match_motive(space, n):
    assert orbit_config_count(space, n) == motive_eval(space.size, n, space.group.order, len(space.singular))


@pytest.mark.parametrize("space, removed", [
    (affine_line_scaling(7, 3), []),
    (affine_line_scaling(7, 3), [0]),
    (multiplicative_inversion(7), []),
    (multiplicative_inversion(7), [0]),  # the point 1
    (multiplicative_inversion(7), [1, 3]),  # the free orbit {2, 4}
    (multiplicative_inversion(11), [9]),  # the point -1
])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_removed_counts_match_subposet(space, removed, n):
    ctx, _ = removal_context(space, n, removed)
    P = enumerate_poset(ctx)
    assert orbit_config_count(space, n, removed) == motive_from_poset(P, n, space.size)


def test_removal_requires_invariance():
    space = multiplicative_inversion(7)
    with pytest.raises(SpaceError):
        orbit_config_count(space, 2, [1])
    with pytest.raises(SpaceError):
        removal_context(space, 2, [1])


def test_size_guard():
    with pytest.raises(SpaceError):
        layer_points(affine_line_scaling(13, 2), 6, affine_line_scaling(13, 2).context(6).bottom())

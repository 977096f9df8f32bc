import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_convex
from oracles import closure_oracle_z, hull_membership_oracle
from tepkit.errors import GeometryViolationError, UsageError
from tepkit.geometry import (
    HeisenbergExp,
    NormLexOrder,
    OrderLowerSets,
    SequenceOrder,
    StdLattice,
    TreeConvex,
    anti_shelling,
    check_midpointed,
    corners,
    geometry_from_json,
    hull_membership_lattice,
    translated_lax_corners,
)
from tepkit.groups import (
    FreeGroup,
    HeisenbergGroup,
    LatticeGroup,
    shape,
    translate_shape,
)


def sqrt19_ball(z2):
    return shape(
        z2,
        (
            (x, y)
            for x in range(-5, 6)
            for y in range(-5, 6)
            if x * x + y * y <= 19
        ),
    )


def all_geometries():
    return [
        StdLattice(LatticeGroup(1)),
        StdLattice(LatticeGroup(2)),
        StdLattice(LatticeGroup(3)),
        TreeConvex(FreeGroup(2)),
        HeisenbergExp(HeisenbergGroup()),
        OrderLowerSets(NormLexOrder(LatticeGroup(2))),
    ]


GEO_IDS = ["z1", "z2", "z3", "tree", "heis", "lowersets"]


def _radius_for(geometry):
    return 2 if isinstance(geometry, HeisenbergExp) else 3


# -- golden examples --------------------------------------------------------


def test_closure_triangle_golden(z2, std2):
    s = shape(z2, [(0, 0), (3, -1), (2, 3)])
    closed = std2.closure(s)
    extra = set(closed.members) - set(s.members)
    assert extra == {(1, 0), (2, 0), (1, 1), (2, 1), (2, 2)}


def test_hull_membership_golden(z2):
    s = shape(z2, [(0, 0), (3, -1), (2, 3)])
    assert hull_membership_lattice((1, 1), s)
    assert not hull_membership_lattice((1, 2), s)
    assert hull_membership_lattice((0, 0), s)
    with pytest.raises(UsageError):
        hull_membership_lattice((0, 0), shape(z2, []))


def test_sqrt19_ball_convex(z2, std2):
    ball = sqrt19_ball(z2)
    assert len(ball) == 61
    assert std2.is_convex(ball)


def test_corners_unit_square(z2, std2):
    sq = shape(z2, [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert set(corners(std2, sq).members) == set(sq.members)
    with pytest.raises(UsageError):
        corners(std2, shape(z2, [(0, 0), (2, 0)]))


def test_translated_lax_corners_goldens(z2, std2, triangle):
    assert set(translated_lax_corners(std2, triangle).members) == set(
        triangle.members
    )
    s = shape(z2, [(0, 0), (1, 0), (2, 0), (1, 1)])
    assert set(translated_lax_corners(std2, s).members) == {
        (0, 0),
        (2, 0),
        (1, 1),
    }


def test_tree_closure_golden(f2, tree2):
    closed = tree2.closure(shape(f2, ["ab", "BA"]))
    assert set(closed.members) == {"", "a", "A", "b", "B", "ab", "BA"}


def test_tree_ball_convex(f2, tree2):
    ball = shape(f2, f2.ball("", 4))
    assert len(ball) == 161
    assert tree2.is_convex(ball)
    r1 = shape(f2, f2.ball("", 1))
    assert set(corners(tree2, r1).members) == {"a", "A", "b", "B"}


# -- closure laws -----------------------------------------------------------


@pytest.mark.parametrize("geometry", all_geometries(), ids=GEO_IDS)
def test_closure_laws_random(geometry):
    rng = random.Random(5)
    grp = geometry.group
    from tepkit.groups import sample_element

    radius = _radius_for(geometry)
    assert len(geometry.closure(shape(grp, []))) == 0
    for _ in range(100):
        pts = [sample_element(grp, rng, radius) for _ in range(rng.randint(1, 4))]
        base = shape(grp, pts)
        closed = geometry.closure(base)
        # extensive
        assert set(base.members) <= set(closed.members)
        # idempotent
        assert geometry.closure(closed) == closed
        # monotone: closure of a subset stays inside
        sub = shape(grp, rng.sample(pts, rng.randint(1, len(pts))))
        assert set(geometry.closure(sub).members) <= set(closed.members)


@pytest.mark.parametrize("geometry", all_geometries(), ids=GEO_IDS)
def test_intersection_closed(geometry):
    rng = random.Random(8)
    for _ in range(60):
        a = random_convex(geometry, rng, radius=_radius_for(geometry))
        b = random_convex(geometry, rng, radius=_radius_for(geometry))
        both = set(a.members) & set(b.members)
        assert geometry.is_convex_set(both)


@pytest.mark.parametrize("geometry", all_geometries(), ids=GEO_IDS)
def test_corner_addition_random(geometry):
    rng = random.Random(13)
    grp = geometry.group
    for _ in range(40):
        d = random_convex(geometry, rng, radius=_radius_for(geometry))
        if len(d) == 0:
            continue
        sub = rng.sample(list(d.members), rng.randint(1, len(d)))
        c = geometry.closure(shape(grp, sub))
        if not set(c.members) <= set(d.members):
            continue
        chain = anti_shelling(geometry, c, d)
        assert len(chain.added) == len(d) - len(c)
        for prefix in chain.prefixes():
            assert geometry.is_convex(prefix)


def test_anti_shelling_policies(z2, std2):
    ball = sqrt19_ball(z2)
    base = shape(z2, [(0, 0)])
    a = anti_shelling(std2, base, ball)
    b = anti_shelling(std2, base, ball, policy="seeded-random", seed=9)
    assert len(a.added) == len(b.added) == 60
    assert set(a.added) == set(b.added)
    for prefix in b.prefixes():
        assert std2.is_convex(prefix)
    with pytest.raises(UsageError):
        anti_shelling(std2, shape(z2, [(9, 9)]), ball)
    with pytest.raises(UsageError):
        anti_shelling(std2, base, shape(z2, [(0, 0), (2, 0)]))


# -- midpointedness ---------------------------------------------------------


@pytest.mark.parametrize(
    "geometry",
    [
        StdLattice(LatticeGroup(2)),
        TreeConvex(FreeGroup(2)),
        HeisenbergExp(HeisenbergGroup()),
    ],
    ids=["z2", "tree", "heis"],
)
def test_midpointed(geometry):
    grp = geometry.group
    if isinstance(grp, LatticeGroup):
        s = shape(grp, [(1, 0), (0, 1), (1, 1)])
        radius = 4
    elif isinstance(grp, FreeGroup):
        s = shape(grp, grp.ball("", 1))
        radius = 4
    else:
        s = shape(grp, [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 2)])
        radius = 2
    ok, witness = check_midpointed(geometry, s, samples=60, radius=radius)
    assert ok, witness


def test_broken_order_witness():
    z1 = LatticeGroup(1)
    # (1,) is enumerated after both of its neighbors, breaking g in
    # closure({g+h, g-h}).
    order = SequenceOrder(z1, [(0,), (2,)], base=NormLexOrder(z1))
    geometry = OrderLowerSets(order)
    ok, witness = check_midpointed(geometry, shape(z1, [(1,)]), samples=100)
    assert not ok
    g, h = witness
    pair = shape(z1, [z1.mul(g, h), z1.mul(g, z1.inv(h))])
    assert g not in geometry.closure(pair)


def test_norm_lex_lower_sets():
    z2 = LatticeGroup(2)
    geometry = OrderLowerSets(NormLexOrder(z2))
    prefix = geometry.order.prefix(9)
    assert prefix[0] == (0, 0)
    assert set(prefix) == {(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1)}
    assert geometry.is_convex_set(prefix[:4])
    assert not geometry.is_convex_set([(0, 0), (5, 5)])
    assert geometry.closure_set([(1, 1)]) == set(geometry.order.prefix(
        geometry.order.position((1, 1)) + 1
    ))
    with pytest.raises(UsageError):
        translated_lax_corners(geometry, shape(z2, [(0, 0)]))


# -- invariance and misc ----------------------------------------------------


@pytest.mark.parametrize(
    "geometry",
    [
        StdLattice(LatticeGroup(2)),
        TreeConvex(FreeGroup(2)),
        HeisenbergExp(HeisenbergGroup()),
    ],
    ids=["z2", "tree", "heis"],
)
def test_translation_invariance(geometry):
    rng = random.Random(2)
    grp = geometry.group
    from tepkit.groups import sample_element

    radius = _radius_for(geometry)
    for _ in range(30):
        pts = [sample_element(grp, rng, radius) for _ in range(rng.randint(1, 3))]
        g = sample_element(grp, rng, radius)
        base = shape(grp, pts)
        moved = translate_shape(g, base)
        assert geometry.closure(moved) == translate_shape(
            g, geometry.closure(base)
        )


def test_tree_shelling_state_matches_recheck(f2, tree2):
    rng = random.Random(21)
    from tepkit.groups import sample_element

    for _ in range(30):
        pts = [sample_element(f2, rng, 3) for _ in range(rng.randint(1, 3))]
        c = tree2.closure(shape(f2, pts))
        state = tree2.shelling_state(c.members)
        for _ in range(10):
            a = sample_element(f2, rng, 4)
            if a in state.members:
                continue
            expected = tree2.is_convex_set(set(state.members) | {a})
            assert state.try_add(a) == expected


def test_geometry_json_roundtrip():
    for geometry in all_geometries():
        again = geometry_from_json(geometry.to_json(), geometry.group)
        assert type(again) is type(geometry)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
        min_size=1,
        max_size=5,
    )
)
def test_closure_matches_oracle_z2(pts):
    z2 = LatticeGroup(2)
    std2 = StdLattice(z2)
    assert set(std2.closure(shape(z2, pts)).members) == closure_oracle_z(pts)


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)
        ),
        min_size=1,
        max_size=4,
    )
)
def test_hull_membership_matches_oracle_z3(pts):
    z3 = LatticeGroup(3)
    s = shape(z3, pts)
    los = [min(p[i] for p in pts) for i in range(3)]
    his = [max(p[i] for p in pts) for i in range(3)]
    for x in range(los[0], his[0] + 1):
        for y in range(los[1], his[1] + 1):
            for z in range(los[2], his[2] + 1):
                v = (x, y, z)
                assert hull_membership_lattice(v, s) == hull_membership_oracle(
                    v, pts
                )

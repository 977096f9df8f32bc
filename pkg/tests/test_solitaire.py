import itertools
import random

import pytest

from tepkit.errors import ResourceBudgetError, UsageError
from tepkit.families import Pattern
from tepkit.groups import shape
from tepkit.solitaire import (
    SolitaireMove,
    SupportConfig,
    apply_move,
    component,
    default_corner_set,
    is_legal_move,
    legal_moves,
    transport_pattern,
    verify_independent,
)


def row(z2, n):
    return shape(z2, ((x, 0) for x in range(n)))


@pytest.fixture
def tri(z2):
    return shape(z2, [(0, 0), (1, 0), (0, 1)])


def test_default_corner_set(tri):
    assert set(default_corner_set(tri).members) == set(tri.members)


def test_legal_moves_row(z2, tri):
    y = SupportConfig(row(z2, 3))
    moves = legal_moves(y, tri)
    assert moves
    for m in moves:
        # exactly one endpoint inside the support
        assert ((m.a in y.support) != (m.b in y.support))
        assert is_legal_move(y, m, tri, default_corner_set(tri))
    # canonical order is stable
    assert moves == legal_moves(y, tri)
    with pytest.raises(UsageError):
        legal_moves(y, tri, shape(z2, [(7, 7)]))
    with pytest.raises(UsageError):
        legal_moves(y, tri, shape(z2, []))


def test_apply_move_involution(z2, tri):
    t = default_corner_set(tri)
    y = SupportConfig(row(z2, 3))
    for m in legal_moves(y, tri):
        z = apply_move(y, m, tri, t)
        assert len(z.support) == len(y.support)
        assert is_legal_move(z, m, tri, t)
        assert apply_move(z, m, tri, t) == y
    bogus = SolitaireMove((9, 9), (9, 9), (10, 9))
    assert not is_legal_move(y, bogus, tri, t)
    with pytest.raises(UsageError):
        apply_move(y, bogus, tri, t)


def test_component_row3(z2, tri):
    rep = component(SupportConfig(row(z2, 3)), tri)
    assert rep == {"size": 16, "exhausted": True}
    rep = component(SupportConfig(row(z2, 2)), tri)
    assert rep["size"] == 3
    with pytest.raises(UsageError):
        component(SupportConfig(row(z2, 3)), tri, limit=0)


def test_component_limit(z2, tri):
    rep = component(SupportConfig(row(z2, 3)), tri, limit=5)
    assert rep["size"] == 5
    assert not rep["exhausted"]


def test_component_members(z2, tri):
    rep = component(SupportConfig(row(z2, 2)), tri, collect_members=True)
    assert len(rep["members"]) == rep["size"] == 3
    assert sorted(rep["members"]) == rep["members"]


def test_independence_preserved_by_moves(z2, std2, tri, ledrappier):
    t = default_corner_set(tri)
    y = SupportConfig(row(z2, 3))
    assert verify_independent(y, ledrappier, std2)
    rng = random.Random(6)
    for _ in range(10):
        moves = legal_moves(y, tri, t)
        y = apply_move(y, rng.choice(moves), tri, t)
        assert verify_independent(y, ledrappier, std2)


def test_not_independent(z2, std2, tri, ledrappier):
    y = SupportConfig(tri)
    assert not verify_independent(y, ledrappier, std2)
    with pytest.raises(ResourceBudgetError):
        verify_independent(SupportConfig(row(z2, 5)), ledrappier, std2, budget=8)


def test_transport_involution(z2, std2, tri, ledrappier):
    t = default_corner_set(tri)
    y = SupportConfig(row(z2, 3))
    for values in itertools.product(range(2), repeat=3):
        p = Pattern(y.support, values)
        for m in legal_moves(y, tri, t):
            q = transport_pattern(p, y, m, ledrappier, tri, t)
            z = SupportConfig(q.domain)
            back = transport_pattern(q, z, m, ledrappier, tri, t)
            assert back == p


def test_transport_bijection(z2, std2, tri, ledrappier):
    t = default_corner_set(tri)
    y = SupportConfig(row(z2, 3))
    m = legal_moves(y, tri, t)[0]
    images = {
        transport_pattern(Pattern(y.support, v), y, m, ledrappier, tri, t).values
        for v in itertools.product(range(2), repeat=3)
    }
    assert len(images) == 8


def test_transport_validation(z2, std2, tri, ledrappier, s3_family):
    t = default_corner_set(tri)
    y = SupportConfig(row(z2, 3))
    m = legal_moves(y, tri, t)[0]
    with pytest.raises(UsageError):
        transport_pattern(Pattern(row(z2, 2), (0, 0)), y, m, ledrappier, tri, t)
    bogus = SolitaireMove((9, 9), (9, 9), (10, 9))
    with pytest.raises(UsageError):
        transport_pattern(Pattern(y.support, (0, 0, 0)), y, bogus, ledrappier, tri, t)


def test_move_json_roundtrip(z2, tri):
    y = SupportConfig(row(z2, 3))
    m = legal_moves(y, tri)[0]
    assert SolitaireMove.from_json(m.to_json(z2), z2) == m

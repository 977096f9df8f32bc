import random

import pytest

from tepkit.families import Alphabet, GroupWordRule, WeightedSumModRule, make_family
from tepkit.geometry import StdLattice, TreeConvex, default_geometry
from tepkit.groups import FreeGroup, LatticeGroup, shape
from tepkit.render import s3_symbols


@pytest.fixture(scope="session")
def z2():
    return LatticeGroup(2)


@pytest.fixture(scope="session")
def std2(z2):
    return StdLattice(z2)


@pytest.fixture(scope="session")
def f2():
    return FreeGroup(2)


@pytest.fixture(scope="session")
def tree2(f2):
    return TreeConvex(f2)


@pytest.fixture(scope="session")
def triangle(z2):
    return shape(z2, [(1, 0), (0, 1), (1, 1)])


@pytest.fixture(scope="session")
def ledrappier(z2, std2):
    s = shape(z2, [(0, 0), (1, 0), (0, 1)])
    rule = WeightedSumModRule(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1}, 0)
    return make_family(s, Alphabet(2), rule, geometry=std2)


@pytest.fixture(scope="session")
def s3_family(z2, std2):
    labels, table = s3_symbols()
    s = shape(z2, [(0, -1), (-1, 0), (0, 0)])
    # The lower neighbor is the product of the left and center cells.
    rule = GroupWordRule(table, [((-1, 0), 1), ((0, 0), 1), ((0, -1), -1)], 0)
    return make_family(s, Alphabet(6, labels), rule, geometry=std2)


@pytest.fixture(scope="session")
def z6_family(z2, std2):
    s = shape(z2, [(0, -1), (-1, 0), (0, 0)])
    rule = WeightedSumModRule(6, {(0, -1): 1, (-1, 0): 1, (0, 0): 1}, 0)
    return make_family(s, Alphabet(6), rule, geometry=std2)


@pytest.fixture(scope="session")
def tree_family(f2, tree2):
    # Xor over the radius-1 ball; any cell is determined by the other four.
    s = shape(f2, f2.ball(f2.identity(), 1))
    rule = WeightedSumModRule(2, {m: 1 for m in s.members}, 0)
    return make_family(s, Alphabet(2), rule, geometry=tree2)


def random_convex(geometry, rng: random.Random, radius: int = 3, points: int = 3):
    """Closure of a few random points, for property suites."""
    from tepkit.groups import sample_element

    grp = geometry.group
    pts = [sample_element(grp, rng, radius) for _ in range(rng.randint(1, points))]
    return geometry.closure(shape(grp, pts))

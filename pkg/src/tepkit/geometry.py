"""Convex geometries on the supported groups and the anti-shelling machinery.

Four geometries are provided: the standard lattice geometry on Z^d, tree
convexity on free groups, the exponential-coordinate geometry on the discrete
Heisenberg group, and lower sets of a type-omega enumeration. All feasibility
tests use exact integer arithmetic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Tuple

from .errors import GeometryViolationError, UsageError
from .groups import (
    Element,
    FreeGroup,
    Group,
    HeisenbergGroup,
    LatticeGroup,
    Shape,
    shape,
)


# ---------------------------------------------------------------------------
# Exact strict-feasibility kernel (Fourier-Motzkin on integer rows)


def _normalize_row(row):
    g = 0
    for a in row:
        g = gcd(g, abs(a))
    if g > 1:
        row = tuple(a // g for a in row)
    return row


def _strictly_feasible(rows) -> bool:
    """Whether some real x satisfies r . x > 0 for every row r."""
    rows = {_normalize_row(tuple(r)) for r in rows}
    while True:
        if any(not any(r) for r in rows):
            return False
        if not rows:
            return True
        width = len(next(iter(rows)))
        if width == 0:
            return not rows
        pos = [r for r in rows if r[0] > 0]
        neg = [r for r in rows if r[0] < 0]
        zero = [r[1:] for r in rows if r[0] == 0]
        if not pos or not neg:
            # The first variable is one-sidedly constrained; push it to
            # +-infinity and keep only the remaining constraints.
            rows = {_normalize_row(r) for r in zero}
            continue
        combined = set(_normalize_row(r) for r in zero)
        for rp in pos:
            for rn in neg:
                row = tuple(
                    -rn[0] * a + rp[0] * b for a, b in zip(rp[1:], rn[1:])
                )
                combined.add(_normalize_row(row))
        rows = combined


def hull_membership_lattice(v: Element, s: Shape) -> bool:
    """Whether v lies in the real convex hull of the lattice shape s."""
    if not isinstance(s.group, LatticeGroup):
        raise UsageError("hull membership is defined for lattice shapes")
    if len(s) == 0:
        raise UsageError("hull membership of an empty shape")
    s.group.check(v)
    # v is outside conv(S) iff a strictly separating functional exists,
    # i.e. iff (w - v) . x > 0 is feasible over all w in S.
    rows = [tuple(a - b for a, b in zip(w, v)) for w in s.members]
    return not _strictly_feasible(rows)


# ---------------------------------------------------------------------------
# Planar integer hulls (fast path for Z^2)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2d(points):
    """Strict convex hull in counterclockwise order, no collinear vertices."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _segment_lattice_count(a, b) -> int:
    return gcd(abs(a[0] - b[0]), abs(a[1] - b[1])) + 1


def _hull2d_lattice_count(hull) -> int:
    """Number of lattice points in a polygon, via Pick's theorem."""
    if len(hull) == 1:
        return 1
    if len(hull) == 2:
        return _segment_lattice_count(hull[0], hull[1])
    area2 = 0
    boundary = 0
    for p, q in zip(hull, hull[1:] + hull[:1]):
        area2 += p[0] * q[1] - q[0] * p[1]
        boundary += _segment_lattice_count(p, q) - 1
    # Pick: points = interior + boundary = area + boundary/2 + 1.
    return (area2 + boundary + 2) // 2


def _in_hull2d(hull, p) -> bool:
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        a, b = hull
        if _cross(a, b, p) != 0:
            return False
        return min(a, b) <= p <= max(a, b)
    for a, b in zip(hull, hull[1:] + hull[:1]):
        if _cross(a, b, p) < 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Geometry interface


class ConvexGeometry:
    """A convexoid given by a closure operator on finite subsets."""

    kind: str
    invariant: bool = True

    def __init__(self, group: Group):
        self.group = group

    def closure(self, s: Shape) -> Shape:
        raise NotImplementedError

    def is_convex(self, c: Shape) -> bool:
        return self.closure(c) == c

    def closure_set(self, members) -> frozenset:
        return frozenset(self.closure(shape(self.group, members)))

    def is_convex_set(self, members) -> bool:
        return self.is_convex(shape(self.group, members))

    def shelling_state(self, members) -> "_ShellingState":
        return _ShellingState(self, set(members))

    def to_json(self):
        return {"geometry": self.kind}

    def __repr__(self):
        return f"{type(self).__name__}({self.group!r})"


class _ShellingState:
    """Mutable cursor over a growing convex set; try_add commits on success."""

    def __init__(self, geometry, members):
        self.geometry = geometry
        self.members = members

    def try_add(self, a) -> bool:
        if not self.geometry.is_convex_set(self.members | {a}):
            return False
        self.members.add(a)
        return True


class StdLattice(ConvexGeometry):
    """Real-hull convexity on Z^d: C is convex iff C = conv(C) across Z^d."""

    kind = "std-lattice"

    def __init__(self, group: LatticeGroup):
        if not isinstance(group, LatticeGroup):
            raise UsageError("std-lattice geometry needs a lattice group")
        super().__init__(group)

    def closure(self, s: Shape) -> Shape:
        if len(s) <= 1:
            return s
        d = self.group.d
        if d == 1:
            lo = min(m[0] for m in s.members)
            hi = max(m[0] for m in s.members)
            return shape(self.group, ((x,) for x in range(lo, hi + 1)))
        if d == 2:
            hull = _hull2d(s.members)
            out = [
                p
                for p in self._box(s.members)
                if _in_hull2d(hull, p)
            ]
            return shape(self.group, out)
        out = [p for p in self._box(s.members) if hull_membership_lattice(p, s)]
        return shape(self.group, out)

    def is_convex(self, c: Shape) -> bool:
        if len(c) <= 1:
            return True
        if self.group.d == 1:
            lo = min(m[0] for m in c.members)
            hi = max(m[0] for m in c.members)
            return len(c) == hi - lo + 1
        if self.group.d == 2:
            hull = _hull2d(c.members)
            return len(c) == _hull2d_lattice_count(hull)
        return self.closure(c) == c

    @staticmethod
    def _box(members):
        lo = [min(m[i] for m in members) for i in range(len(members[0]))]
        hi = [max(m[i] for m in members) for i in range(len(members[0]))]
        return itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))


class TreeConvex(ConvexGeometry):
    """Tree convexity on the Cayley tree of a free group.

    C is convex when for all u, w in C and v on their geodesic, every t with
    d(v, t) < min(d(v, u), d(v, w)) is also in C. The closure is computed as
    a union of balls: around every vertex v of the spanning subtree of C,
    the ball of radius second(v) - 1, where second(v) is the second-largest
    of the per-direction maximal distances from v to C.
    """

    kind = "tree-convex"

    def __init__(self, group: FreeGroup):
        if not isinstance(group, FreeGroup):
            raise UsageError("tree-convex geometry needs a free group")
        super().__init__(group)

    def _direction_dist(self, v: str, u: str):
        """First-edge label and distance of the geodesic from v to u != v."""
        p = 0
        m = min(len(v), len(u))
        while p < m and v[p] == u[p]:
            p += 1
        dist = (len(v) - p) + (len(u) - p)
        label = v[-1].swapcase() if len(v) > p else u[p]
        return label, dist

    def _spanning_tree(self, members):
        it = iter(members)
        root = next(it)
        hull = {root}
        for u in it:
            hull.update(self.group.geodesic(root, u))
        return hull

    def _second_radius(self, v, members):
        """second(v) over directions; the ball radius at v is second - 1."""
        best = {}
        for u in members:
            if u == v:
                continue
            label, dist = self._direction_dist(v, u)
            if dist > best.get(label, 0):
                best[label] = dist
        if len(best) < 2:
            return 0
        top = sorted(best.values(), reverse=True)
        return top[1]

    def closure(self, s: Shape) -> Shape:
        if len(s) <= 1:
            return s
        members = s.members
        out = set(members)
        for v in self._spanning_tree(members):
            out.add(v)
            r = self._second_radius(v, members) - 1
            if r >= 0:
                out.update(self.group.ball(v, r))
        return shape(self.group, out)

    def is_convex(self, c: Shape) -> bool:
        if len(c) <= 1:
            return True
        cset = frozenset(c.members)
        for v in self._spanning_tree(c.members):
            if v not in cset:
                return False
            r = self._second_radius(v, c.members) - 1
            if r >= 1 and not self._ball_within(v, r, cset):
                return False
        return True

    def _ball_within(self, center, radius, allowed) -> bool:
        seen = {center}
        frontier = [center]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for s in self.group._rank:
                    n = self.group.mul(w, s)
                    if n in seen:
                        continue
                    if n not in allowed:
                        return False
                    seen.add(n)
                    nxt.append(n)
            frontier = nxt
        return True

    def shelling_state(self, members):
        return _TreeShellingState(self, set(members))


class _TreeShellingState(_ShellingState):
    """Incremental convexity for corner additions on a tree.

    Keeps per-vertex direction maxima so each candidate costs O(|C|)
    distance computations instead of a full convexity re-check.
    """

    def __init__(self, geometry, members):
        super().__init__(geometry, members)
        self.dirs = {}
        for v in members:
            best = {}
            for u in members:
                if u != v:
                    label, dist = geometry._direction_dist(v, u)
                    if dist > best.get(label, 0):
                        best[label] = dist
            self.dirs[v] = best

    @staticmethod
    def _second(best):
        if len(best) < 2:
            return 0
        top = sorted(best.values(), reverse=True)
        return top[1]

    def try_add(self, a) -> bool:
        geo = self.geometry
        grp = geo.group
        if not self.members:
            self.members.add(a)
            self.dirs[a] = {}
            return True
        # A convex superset with one more element must stay connected.
        if not any(grp.mul(a, s) in self.members for s in grp._rank):
            return False
        updates = []
        allowed = self.members | {a}
        for v in self.members:
            label, dist = geo._direction_dist(v, a)
            best = self.dirs[v]
            if dist > best.get(label, 0):
                grown = dict(best)
                grown[label] = dist
                if self._second(grown) > self._second(best):
                    r = self._second(grown) - 1
                    if r >= 1 and not geo._ball_within(v, r, allowed):
                        return False
                updates.append((v, label, dist))
        for v, label, dist in updates:
            self.dirs[v][label] = dist
        best_a = {}
        for u in self.members:
            label, dist = geo._direction_dist(a, u)
            if dist > best_a.get(label, 0):
                best_a[label] = dist
        self.dirs[a] = best_a
        self.members.add(a)
        return True


class HeisenbergExp(ConvexGeometry):
    """Exponential-coordinate convexity: real hulls in R^3 intersected with H.

    Elements (a, b, c2) embed as (a, b, c2/2); all hull tests run on the
    doubled integer coordinates (2a, 2b, c2).
    """

    kind = "heisenberg-exp"

    def __init__(self, group: HeisenbergGroup):
        if not isinstance(group, HeisenbergGroup):
            raise UsageError("heisenberg-exp geometry needs the Heisenberg group")
        super().__init__(group)

    @staticmethod
    def _scaled(g):
        a, b, c2 = g
        return (2 * a, 2 * b, c2)

    def closure(self, s: Shape) -> Shape:
        if len(s) <= 1:
            return s
        scaled = [self._scaled(g) for g in s.members]
        lo = [min(p[i] for p in scaled) for i in range(3)]
        hi = [max(p[i] for p in scaled) for i in range(3)]
        out = []
        lat = LatticeGroup(3)
        hull = shape(lat, scaled)
        for a in range(lo[0] // 2, hi[0] // 2 + 1):
            for b in range(lo[1] // 2, hi[1] // 2 + 1):
                for c2 in range(lo[2], hi[2] + 1):
                    if (c2 - a * b) % 2 != 0:
                        continue
                    if hull_membership_lattice((2 * a, 2 * b, c2), hull):
                        out.append((a, b, c2))
        return shape(self.group, out)


# ---------------------------------------------------------------------------
# Order-derived lower-set geometries


class OmegaOrder:
    """A type-omega enumeration of a group; lower sets form a convexoid."""

    name: str

    def __init__(self, group: Group):
        self.group = group
        self._prefix: list = []
        self._positions: dict = {}
        self._iter = self._enumerate()

    def _enumerate(self):
        raise NotImplementedError

    def _extend(self):
        g = next(self._iter)
        self._positions[g] = len(self._prefix)
        self._prefix.append(g)

    def position(self, g, limit: int = 1_000_000) -> int:
        while g not in self._positions:
            if len(self._prefix) >= limit:
                raise UsageError(f"element {g!r} not found in the first {limit} order positions")
            self._extend()
        return self._positions[g]

    def prefix(self, n: int):
        while len(self._prefix) < n:
            self._extend()
        return self._prefix[:n]


class NormLexOrder(OmegaOrder):
    """Z^d enumerated by max-norm shells, lexicographic inside each shell.

    This enumeration is midpointed, so its lower sets form a usable
    (non-invariant) convex geometry.
    """

    name = "norm-lex"

    def __init__(self, group: LatticeGroup):
        if not isinstance(group, LatticeGroup):
            raise UsageError("norm-lex order needs a lattice group")
        super().__init__(group)

    def _enumerate(self):
        d = self.group.d
        r = 0
        while True:
            points = sorted(
                p
                for p in itertools.product(range(-r, r + 1), repeat=d)
                if max(abs(x) for x in p) == r
            )
            yield from points
            r += 1


class SequenceOrder(OmegaOrder):
    """An explicit finite enumeration prefix, then a base order's remainder.

    Used to build deliberately broken (non-midpointed) lower-set geometries
    for witness tests.
    """

    name = "sequence"

    def __init__(self, group: Group, prefix, base: Optional[OmegaOrder] = None):
        self._explicit = list(prefix)
        self._base = base
        super().__init__(group)

    def _enumerate(self):
        seen = set()
        for g in self._explicit:
            seen.add(g)
            yield g
        if self._base is not None:
            i = 0
            while True:
                (g,) = self._base.prefix(i + 1)[i:]
                if g not in seen:
                    yield g
                i += 1


class OrderLowerSets(ConvexGeometry):
    """Lower sets of a type-omega order; not translation invariant."""

    kind = "order-lower-sets"
    invariant = False

    def __init__(self, order: OmegaOrder):
        super().__init__(order.group)
        self.order = order

    def closure(self, s: Shape) -> Shape:
        if len(s) == 0:
            return s
        top = max(self.order.position(g) for g in s.members)
        return shape(self.group, self.order.prefix(top + 1))

    def is_convex(self, c: Shape) -> bool:
        if len(c) == 0:
            return True
        return set(c.members) == set(self.order.prefix(len(c)))

    def to_json(self):
        return {"geometry": {self.kind: self.order.name}}


# ---------------------------------------------------------------------------
# Derived operations


def corners(geometry: ConvexGeometry, c: Shape) -> Shape:
    """Elements whose removal keeps the set convex."""
    if not geometry.is_convex(c):
        raise UsageError("corners are defined for convex sets only")
    out = [
        a
        for a in c.members
        if geometry.is_convex_set(m for m in c.members if m != a)
    ]
    return shape(geometry.group, out)


def translated_lax_corners(geometry: ConvexGeometry, s: Shape) -> Shape:
    """For invariant geometries: elements outside the closure of the rest."""
    if not geometry.invariant:
        raise UsageError(
            "translated lax corners need a translation-invariant geometry"
        )
    out = [
        a
        for a in s.members
        if a not in geometry.closure_set(m for m in s.members if m != a)
    ]
    return shape(geometry.group, out)


@dataclass(frozen=True)
class AntiShelling:
    """A chain of convex sets from base to base + added, one element a step."""

    base: Shape
    added: Tuple[Element, ...]
    geometry: ConvexGeometry

    def prefixes(self):
        cur = set(self.base.members)
        yield shape(self.geometry.group, cur)
        for a in self.added:
            cur.add(a)
            yield shape(self.geometry.group, cur)

    def to_json(self):
        enc = self.geometry.group.element_to_json
        return {"base": self.base.to_json(), "added": [enc(a) for a in self.added]}


def anti_shelling(
    geometry: ConvexGeometry,
    c: Shape,
    d: Shape,
    policy: str = "min-canonical",
    seed: int = 0,
) -> AntiShelling:
    """Grow c to d one corner addition at a time."""
    if not set(c.members) <= set(d.members):
        raise UsageError("anti-shelling needs base contained in target")
    if not geometry.is_convex(c) or not geometry.is_convex(d):
        raise UsageError("anti-shelling endpoints must be convex")
    remaining = [a for a in d.members if a not in c]
    state = geometry.shelling_state(c.members)
    rng = random.Random(seed) if policy == "seeded-random" else None
    added = []
    while remaining:
        if rng is not None:
            rng.shuffle(remaining)
        for i, a in enumerate(remaining):
            if state.try_add(a):
                added.append(a)
                remaining.pop(i)
                break
        else:
            raise GeometryViolationError(
                "no corner addition available; the geometry violates the "
                "corner addition property"
            )
        if rng is not None:
            remaining.sort(key=geometry.group.key)
    return AntiShelling(c, tuple(added), geometry)


def check_midpointed(
    geometry: ConvexGeometry,
    s: Shape,
    samples: int = 100,
    seed: int = 0,
    radius: int = 4,
):
    """Spot-check g in closure({gh, gh^-1}) for sampled g and all h in s.

    Returns (True, None) or (False, (g, h)) with the first counterexample.
    """
    from .groups import sample_element

    grp = geometry.group
    rng = random.Random(seed)
    for _ in range(samples):
        g = sample_element(grp, rng, radius)
        for h in s.members:
            pair = {grp.mul(g, h), grp.mul(g, grp.inv(h))}
            if g not in geometry.closure_set(pair):
                return False, (g, h)
    return True, None


# ---------------------------------------------------------------------------
# JSON plumbing


def geometry_from_json(data, group: Group) -> ConvexGeometry:
    spec = data["geometry"] if isinstance(data, dict) and "geometry" in data else data
    if spec == "std-lattice":
        return StdLattice(group)
    if spec == "tree-convex":
        return TreeConvex(group)
    if spec == "heisenberg-exp":
        return HeisenbergExp(group)
    if isinstance(spec, dict) and "order-lower-sets" in spec:
        order_name = spec["order-lower-sets"]
        if order_name == "norm-lex":
            return OrderLowerSets(NormLexOrder(group))
        raise UsageError(f"unknown order spec {order_name!r}")
    raise UsageError(f"unknown geometry spec {spec!r}")


def default_geometry(group: Group) -> ConvexGeometry:
    if isinstance(group, LatticeGroup):
        return StdLattice(group)
    if isinstance(group, FreeGroup):
        return TreeConvex(group)
    if isinstance(group, HeisenbergGroup):
        return HeisenbergExp(group)
    raise UsageError(f"no default geometry for {group!r}")

"""Left-invariant total orders and S-contours.

Three orders are provided: lexicographic on Z^d, a rational weight vector
with lexicographic tie-break, and the Magnus ordering on free groups via
truncated noncommutative power series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import PropertyViolationError, UsageError
from .families import Pattern, TepFamily
from .groups import Element, FreeGroup, Group, LatticeGroup, Shape, shape
from .rng import draw_index


class InvariantOrder:
    """A left-invariant total order, exposed as a three-way comparison."""

    def __init__(self, group: Group):
        self.group = group

    def compare(self, u: Element, v: Element) -> int:
        raise NotImplementedError

    def sort_key(self):
        return cmp_to_key(self.compare)

    def max(self, elements):
        it = iter(elements)
        best = next(it)
        for e in it:
            if self.compare(e, best) > 0:
                best = e
        return best

    def to_json(self):
        raise NotImplementedError


class LexOrder(InvariantOrder):
    """Lexicographic comparison of lattice coordinates."""

    def __init__(self, group: LatticeGroup):
        if not isinstance(group, LatticeGroup):
            raise UsageError("lex order needs a lattice group")
        super().__init__(group)

    def compare(self, u, v):
        return (u > v) - (u < v)

    def to_json(self):
        return {"lex": self.group.d}


class RationalVectorOrder(InvariantOrder):
    """Compare dot products with a rational weight vector, then break ties
    lexicographically so the order stays total."""

    def __init__(self, group: LatticeGroup, weights: Sequence[Fraction]):
        if not isinstance(group, LatticeGroup):
            raise UsageError("vector order needs a lattice group")
        if len(weights) != group.d:
            raise UsageError("weight vector length must match the dimension")
        super().__init__(group)
        self.weights = tuple(Fraction(w) for w in weights)

    def compare(self, u, v):
        du = sum(w * x for w, x in zip(self.weights, u))
        dv = sum(w * x for w, x in zip(self.weights, v))
        if du != dv:
            return 1 if du > dv else -1
        return (u > v) - (u < v)

    def to_json(self):
        return {
            "vector": {
                "w": [[w.numerator, w.denominator] for w in self.weights]
            }
        }


class MagnusOrder(InvariantOrder):
    """The Magnus ordering on a free group.

    Words map into noncommutative power series by generator -> 1 + generator
    (inverses expand as truncated alternating series); series are compared
    coefficient by coefficient over monomials sorted by length then
    lexicographically.
    """

    def __init__(self, group: FreeGroup, check_injective: bool = False):
        if not isinstance(group, FreeGroup):
            raise UsageError("Magnus order needs a free group")
        super().__init__(group)
        self.check_injective = check_injective

    def _series(self, word: str, degree: int) -> Dict[Tuple[int, ...], int]:
        coeffs = {(): 1}
        for c in word:
            gen = ord(c.lower()) - ord("a")
            if c.islower():
                factor = {(): 1, (gen,): 1}
            else:
                factor = {
                    (gen,) * i: (-1) ** i for i in range(degree + 1)
                }
            out: Dict[Tuple[int, ...], int] = {}
            for mono, a in coeffs.items():
                room = degree - len(mono)
                for fm, b in factor.items():
                    if len(fm) > room:
                        continue
                    key = mono + fm
                    out[key] = out.get(key, 0) + a * b
            coeffs = {m: v for m, v in out.items() if v != 0}
        return coeffs

    def compare(self, u, v):
        if u == v:
            return 0
        degree = max(1, len(u) + len(v))
        su = self._series(u, degree)
        sv = self._series(v, degree)
        monomials = sorted(set(su) | set(sv), key=lambda m: (len(m), m))
        for m in monomials:
            a, b = su.get(m, 0), sv.get(m, 0)
            if a != b:
                return 1 if a > b else -1
        if self.check_injective:
            raise PropertyViolationError(
                f"Magnus truncation at degree {degree} cannot separate "
                f"{u!r} and {v!r}"
            )
        return 0

    def to_json(self):
        return {"magnus": self.group.n}


def order_from_json(data, group: Group) -> InvariantOrder:
    if "lex" in data:
        return LexOrder(group)
    if "vector" in data:
        weights = [Fraction(n, d) for n, d in data["vector"]["w"]]
        return RationalVectorOrder(group, weights)
    if "magnus" in data:
        return MagnusOrder(group)
    raise UsageError(f"unknown order spec {sorted(data)!r}")


def good_position(s: Shape, order: InvariantOrder):
    """Translate so the identity is the order-maximal element of the shape.

    Returns (g, gS) with g the inverse of the maximal element.
    """
    if len(s) == 0:
        raise UsageError("good position of an empty shape")
    grp = s.group
    g = grp.inv(order.max(s.members))
    from .groups import translate_shape

    return g, translate_shape(g, s)


@dataclass(frozen=True)
class Contour:
    """Cells of a region whose good-positioned shape translate sticks out."""

    region: Shape
    shape: Shape
    members: Shape
    fill_order: Tuple[Element, ...]


def s_contour(c: Shape, s: Shape, order: InvariantOrder) -> Contour:
    """The contour of c for the (auto good-positioned) shape s.

    A cell g belongs to the contour when gS does not fit inside c; the
    remaining cells are returned sorted ascending, which is the order in
    which they become uniquely determined.
    """
    grp = c.group
    ident = grp.identity()
    if ident not in s or order.max(s.members) != ident:
        _, s = good_position(s, order)
    cset = set(c.members)
    contour = []
    inner = []
    for g in c.members:
        if all(grp.mul(g, t) in cset for t in s.members):
            inner.append(g)
        else:
            contour.append(g)
    inner.sort(key=order.sort_key())
    return Contour(c, s, shape(grp, contour), tuple(inner))


def fill_via_contour(
    p: Pattern,
    c: Shape,
    family: TepFamily,
    order: InvariantOrder,
    seed: int = 0,
) -> Pattern:
    """Complete an arbitrary contour assignment to all of c.

    The family must leave exactly k symbols free at its order-maximal cell;
    interior cells are filled ascending, drawing among the k options.
    """
    from .families import verify_uniform_extensions
    from .tep import _legal_symbols

    grp = c.group
    top = order.max(family.shape.members)
    k, witness = verify_uniform_extensions(
        family.rule,
        family.shape,
        shape(grp, [top]),
        family.alphabet,
    )
    if k is None:
        raise UsageError(
            "family lacks uniform extensions at the order-maximal cell"
        )
    contour = s_contour(c, family.shape, order)
    if set(p.domain.members) != set(contour.members.members):
        raise UsageError("pattern must be given exactly on the contour")
    values = dict(p.as_dict())
    members = family.shape.members
    g_top_inv = grp.inv(top)
    for j, cell in enumerate(contour.fill_order):
        g = grp.mul(cell, g_top_inv)
        translate = tuple(grp.mul(g, m) for m in members)
        options = _legal_symbols(values, cell, [translate], family)
        if len(options) != k:
            raise PropertyViolationError(
                f"expected {k} legal symbols at {cell!r}, found {len(options)}"
            )
        values[cell] = options[draw_index(seed, k, j)]
    return Pattern(c, tuple(values[x] for x in c.members))


def rectangle_count_exponent(n1: int, n2: int, s: Shape) -> int:
    """Exponent e with |A|^e legal patterns on the n1 x n2 rectangle."""
    if not isinstance(s.group, LatticeGroup) or s.group.d != 2:
        raise UsageError("the rectangle count is specific to Z^2 shapes")
    xs = [g[0] for g in s.members]
    ys = [g[1] for g in s.members]
    m1 = max(xs) - min(xs)
    m2 = max(ys) - min(ys)
    if n1 < m1 or n2 < m2:
        raise UsageError("rectangle smaller than the shape's bounding box")
    return n1 * m2 + m1 * n2 - m1 * m2

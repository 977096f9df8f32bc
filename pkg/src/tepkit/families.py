"""TEP families: shapes with alphabets and local rules.

A rule describes the allowed patterns on the defining shape. Families are
verified at construction: filling everything but a declared corner must
always leave exactly k legal symbols, for one k shared by all corners.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ResourceBudgetError, UsageError
from .groups import Element, Group, Shape, shape, translate_shape

VERIFY_BUDGET = 10**8


class Alphabet:
    """Symbols 0..size-1, with optional display labels."""

    def __init__(self, size: int, labels: Optional[Sequence[str]] = None):
        if size < 2:
            raise UsageError("alphabet size must be at least 2")
        if labels is not None and len(labels) != size:
            raise UsageError("label count must match alphabet size")
        self.size = size
        self.labels = tuple(labels) if labels is not None else None

    def to_json(self):
        if self.labels is None:
            return self.size
        return {"size": self.size, "labels": list(self.labels)}

    @staticmethod
    def from_json(data) -> "Alphabet":
        if isinstance(data, int):
            return Alphabet(data)
        return Alphabet(int(data["size"]), data.get("labels"))

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.to_json() == other.to_json()

    def __repr__(self):
        return f"Alphabet({self.size})"


class Rule:
    """Membership test for value tuples aligned with the shape's member order."""

    def allows(self, shape_members: Tuple[Element, ...], values: Tuple[int, ...]) -> bool:
        raise NotImplementedError

    def to_json(self, group: Group):
        raise NotImplementedError


class ExplicitSetRule(Rule):
    def __init__(self, patterns: Sequence[Sequence[int]]):
        self.patterns = frozenset(tuple(p) for p in patterns)
        if not self.patterns:
            raise UsageError("explicit rule needs at least one pattern")

    def allows(self, shape_members, values):
        return values in self.patterns

    def to_json(self, group):
        return {"explicit": [list(p) for p in sorted(self.patterns)]}


class WeightedSumModRule(Rule):
    """sum(c_s * x_s) == target (mod q), coefficients keyed by shape element."""

    def __init__(self, q: int, coeffs: Dict[Element, int], target: int = 0):
        if q < 2:
            raise UsageError("modulus must be at least 2")
        self.q = q
        self.coeffs = dict(coeffs)
        self.target = target % q

    def allows(self, shape_members, values):
        total = 0
        for s, v in zip(shape_members, values):
            total += self.coeffs[s] * v
        return total % self.q == self.target

    def to_json(self, group):
        return {
            "sum-mod": {
                "q": self.q,
                "coeffs": [
                    [group.element_to_json(s), c] for s, c in sorted(
                        self.coeffs.items(), key=lambda kv: group.key(kv[0])
                    )
                ],
                "target": self.target,
            }
        }


class GroupWordRule(Rule):
    """Product of symbol values in a finite group equals a target element.

    The alphabet is identified with the finite group via its multiplication
    table; factors are (shape element, exponent) with exponents +-1, in
    multiplication order.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        factors: Sequence[Tuple[Element, int]],
        target: int = 0,
    ):
        self.table = tuple(tuple(row) for row in table)
        self.factors = tuple((s, e) for s, e in factors)
        self.target = target
        n = len(self.table)
        if any(len(row) != n for row in self.table):
            raise UsageError("multiplication table must be square")
        if any(e not in (1, -1) for _, e in self.factors):
            raise UsageError("factor exponents must be +1 or -1")
        self._inv = [None] * n
        ident = self._identity()
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == ident:
                    self._inv[a] = b
        if any(v is None for v in self._inv):
            raise UsageError("multiplication table has no inverses")

    def _identity(self) -> int:
        for e in range(len(self.table)):
            if all(self.table[e][b] == b and self.table[b][e] == b for b in range(len(self.table))):
                return e
        raise UsageError("multiplication table has no identity")

    def allows(self, shape_members, values):
        val = {s: v for s, v in zip(shape_members, values)}
        acc = self._identity()
        for s, e in self.factors:
            x = val[s]
            if e == -1:
                x = self._inv[x]
            acc = self.table[acc][x]
        return acc == self.target

    def to_json(self, group):
        return {
            "group-word": {
                "table": [list(r) for r in self.table],
                "factors": [[group.element_to_json(s), e] for s, e in self.factors],
                "target": self.target,
            }
        }


def rule_from_json(data, group: Group) -> Rule:
    if "explicit" in data:
        return ExplicitSetRule(data["explicit"])
    if "sum-mod" in data:
        spec = data["sum-mod"]
        coeffs = {group.element_from_json(s): int(c) for s, c in spec["coeffs"]}
        return WeightedSumModRule(int(spec["q"]), coeffs, int(spec.get("target", 0)))
    if "group-word" in data:
        spec = data["group-word"]
        factors = [(group.element_from_json(s), int(e)) for s, e in spec["factors"]]
        return GroupWordRule(spec["table"], factors, int(spec.get("target", 0)))
    raise UsageError(f"unknown rule spec {sorted(data)!r}")


@dataclass(frozen=True)
class Pattern:
    """A finite partial labeling: one symbol per domain element."""

    domain: Shape
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.domain):
            raise UsageError("pattern values must cover the domain exactly")

    def value_at(self, g: Element) -> int:
        return self.as_dict()[g]

    def as_dict(self):
        d = self.__dict__.get("_dict")
        if d is None:
            d = dict(zip(self.domain.members, self.values))
            object.__setattr__(self, "_dict", d)
        return d

    def restrict(self, sub: Shape) -> "Pattern":
        d = self.as_dict()
        return Pattern(sub, tuple(d[g] for g in sub.members))

    def to_json(self):
        return {"domain": self.domain.to_json(), "values": list(self.values)}

    @staticmethod
    def from_json(data) -> "Pattern":
        return Pattern(Shape.from_json(data["domain"]), tuple(int(v) for v in data["values"]))


def verify_uniform_extensions(
    rule: Rule,
    s: Shape,
    corner_set: Shape,
    alphabet: Alphabet,
    budget: int = VERIFY_BUDGET,
):
    """The uniform extension count k, or a failure witness.

    Returns (k, None) if for every corner c and every assignment of the
    other cells there are exactly k symbols completing an allowed pattern;
    otherwise (None, (corner, partial values, count)).
    """
    members = s.members
    if not set(corner_set.members) <= set(members):
        raise UsageError("corner set must be contained in the shape")
    if not corner_set.members:
        raise UsageError("corner set must be nonempty")
    a = alphabet.size
    work = len(corner_set) * a ** len(members)
    if work > budget:
        raise ResourceBudgetError(f"verification needs {work} checks, budget {budget}")
    k = None
    for corner in corner_set.members:
        idx = members.index(corner)
        rest = [i for i in range(len(members)) if i != idx]
        for partial in itertools.product(range(a), repeat=len(rest)):
            values = [0] * len(members)
            for i, v in zip(rest, partial):
                values[i] = v
            count = 0
            for x in range(a):
                values[idx] = x
                if rule.allows(members, tuple(values)):
                    count += 1
            if k is None:
                k = count
            if count != k or count == 0:
                return None, (corner, partial, count)
    return k, None


class TepFamily:
    """A verified k-TEP family: shape, alphabet, rule, corner set."""

    def __init__(
        self,
        shape_: Shape,
        alphabet: Alphabet,
        rule: Rule,
        corner_set: Shape,
        k: int,
    ):
        self.shape = shape_
        self.alphabet = alphabet
        self.rule = rule
        self.corners = corner_set
        self.k = k

    @property
    def group(self) -> Group:
        return self.shape.group

    def allows(self, values: Tuple[int, ...]) -> bool:
        return self.rule.allows(self.shape.members, values)

    def to_json(self):
        return {
            "shape": self.shape.to_json(),
            "alphabet": self.alphabet.to_json(),
            "rule": self.rule.to_json(self.group),
            "corners": {"members": [self.group.element_to_json(c) for c in self.corners.members]},
        }

    def __repr__(self):
        return f"TepFamily(|S|={len(self.shape)}, |A|={self.alphabet.size}, k={self.k})"


def make_family(
    shape_: Shape,
    alphabet: Alphabet,
    rule: Rule,
    corner_set="auto",
    geometry=None,
) -> TepFamily:
    """Build and verify a family; corner_set 'auto' uses translated lax corners."""
    from .geometry import default_geometry, translated_lax_corners

    if corner_set == "auto":
        geo = geometry if geometry is not None else default_geometry(shape_.group)
        if geo.invariant:
            corner_set = translated_lax_corners(geo, shape_)
        else:
            corner_set = shape_
    k, witness = verify_uniform_extensions(rule, shape_, corner_set, alphabet)
    if k is None:
        corner, partial, count = witness
        raise UsageError(
            f"rule is not uniformly extendable at corner {corner!r}: "
            f"{count} completions for one assignment"
        )
    return TepFamily(shape_, alphabet, rule, corner_set, k)


def family_from_json(data, geometry=None) -> TepFamily:
    shp = Shape.from_json(data["shape"])
    alphabet = Alphabet.from_json(data["alphabet"])
    rule = rule_from_json(data["rule"], shp.group)
    corner_spec = data.get("corners", "auto")
    if corner_spec != "auto":
        members = corner_spec["members"] if isinstance(corner_spec, dict) else corner_spec
        corner_spec = shape(shp.group, (shp.group.element_from_json(m) for m in members))
    return make_family(shp, alphabet, rule, corner_spec, geometry)

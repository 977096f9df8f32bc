"""Legality, exact counting, and perfect sampling for TEP families.

All constraint evaluation goes through translates of the family's defining
shape: a pattern is locally legal when every translate of the shape inside
its domain carries an allowed value tuple.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from .errors import PropertyViolationError, ResourceBudgetError, UsageError
from .families import Pattern, TepFamily
from .geometry import ConvexGeometry, anti_shelling
from .groups import Element, Shape, shape
from .rng import draw_index

BRUTEFORCE_BUDGET = 10**7


def _fitting_translates(domain_set, family: TepFamily, cells: Iterable[Element]):
    """Translates g with gS inside domain_set touching one of the cells."""
    grp = family.group
    members = family.shape.members
    seen = set()
    out = []
    for d in cells:
        for s in members:
            g = grp.mul(d, grp.inv(s))
            if g in seen:
                continue
            seen.add(g)
            translate = tuple(grp.mul(g, m) for m in members)
            if all(c in domain_set for c in translate):
                out.append(translate)
    return out


def is_locally_legal(p: Pattern, family: TepFamily) -> bool:
    dom = set(p.domain.members)
    vals = p.as_dict()
    for translate in _fitting_translates(dom, family, p.domain.members):
        if not family.allows(tuple(vals[c] for c in translate)):
            return False
    return True


def _legal_symbols(values: Dict[Element, int], cell, translates, family: TepFamily):
    """Symbols for cell consistent with the given fully-determined translates."""
    out = []
    for x in range(family.alphabet.size):
        values[cell] = x
        if all(
            family.allows(tuple(values[c] for c in tr)) for tr in translates
        ):
            out.append(x)
    del values[cell]
    return out


def legal_corner_symbols(
    p: Pattern, a: Element, family: TepFamily, geometry: ConvexGeometry
) -> List[int]:
    """Symbols b for which p extended by a -> b stays locally legal.

    The count is asserted: k when some translate of the shape fits inside
    the grown set touching a, the full alphabet size otherwise.
    """
    cset = set(p.domain.members)
    if a in cset:
        raise UsageError("cell already labeled")
    grown = cset | {a}
    if not geometry.is_convex(p.domain) or not geometry.is_convex_set(grown):
        raise UsageError("legal_corner_symbols needs convex before/after sets")
    translates = [
        tr for tr in _fitting_translates(grown, family, [a]) if a in tr
    ]
    symbols = _legal_symbols(dict(p.as_dict()), a, translates, family)
    expected = family.k if translates else family.alphabet.size
    if len(symbols) != expected:
        raise PropertyViolationError(
            f"expected {expected} legal symbols at {a!r}, found {len(symbols)}"
        )
    return symbols


class ShellingSchedule:
    """A reusable fill plan for a convex region: one step per cell.

    Each step records the cell and the translates of the shape that fit in
    the prefix and touch it; a step with no translate is a free step.
    """

    def __init__(self, region: Shape, family: TepFamily, geometry: ConvexGeometry):
        if family.group != region.group:
            raise UsageError("region and family live on different groups")
        self.region = region
        self.family = family
        shelling = anti_shelling(geometry, shape(region.group, []), region)
        self.steps = []
        prefix = set()
        for cell in shelling.added:
            prefix.add(cell)
            translates = [
                tr
                for tr in _fitting_translates(prefix, family, [cell])
                if cell in tr
            ]
            self.steps.append((cell, translates))

    @property
    def free_count(self) -> int:
        return sum(1 for _, trs in self.steps if not trs)

    @property
    def determined_count(self) -> int:
        return len(self.steps) - self.free_count

    def fill(self, chooser) -> Pattern:
        """Fill the region; chooser(step_index, options) picks each symbol."""
        values: Dict[Element, int] = {}
        for j, (cell, translates) in enumerate(self.steps):
            options = _legal_symbols(values, cell, translates, self.family)
            if not options:
                raise PropertyViolationError(
                    f"no legal symbol at {cell!r}; family is not TEP here"
                )
            values[cell] = chooser(j, options)
        return Pattern(
            self.region, tuple(values[c] for c in self.region.members)
        )


def count_convex(
    c: Shape,
    shape_s: Shape,
    alphabet_size: int,
    k: int,
    geometry: ConvexGeometry,
) -> Tuple[int, int]:
    """(m, n) with exactly alphabet_size^m * k^n legal patterns on convex c.

    Only the shape is needed, not the rule: m counts anti-shelling steps
    where no translate of the shape fits, n the steps where one does.
    """
    if not geometry.is_convex(c):
        raise UsageError("count_convex needs a convex region")
    grp = c.group
    members = shape_s.members
    shelling = anti_shelling(geometry, shape(grp, []), c)
    prefix = set()
    m = 0
    for cell in shelling.added:
        prefix.add(cell)
        fits = False
        for s in members:
            g = grp.mul(cell, grp.inv(s))
            if all(grp.mul(g, t) in prefix for t in members):
                fits = True
                break
        if not fits:
            m += 1
    return m, len(c) - m


def count_value(alphabet_size: int, k: int, m: int, n: int) -> int:
    return alphabet_size**m * k**n


def count_shape_bruteforce(
    b: Shape,
    family: TepFamily,
    geometry: ConvexGeometry,
    budget: int = BRUTEFORCE_BUDGET,
) -> int:
    """Distinct restrictions to b of locally legal patterns on closure(b)."""
    region = geometry.closure(b)
    schedule = ShellingSchedule(region, family, geometry)
    m, n = schedule.free_count, schedule.determined_count
    walks = count_value(family.alphabet.size, family.k, m, n)
    if walks > budget:
        raise ResourceBudgetError(
            f"enumeration needs {walks} walks, budget {budget}",
            partial=(m, n),
        )
    wanted = b.members
    seen = set()
    values: Dict[Element, int] = {}

    def descend(j: int):
        if j == len(schedule.steps):
            seen.add(tuple(values[c] for c in wanted))
            return
        cell, translates = schedule.steps[j]
        for x in _legal_symbols(values, cell, translates, family):
            values[cell] = x
            descend(j + 1)
        values.pop(cell, None)

    descend(0)
    return len(seen)


class TepSampler:
    """Perfect sampler for the uniform measure on legal patterns of a region."""

    def __init__(self, region: Shape, family: TepFamily, geometry: ConvexGeometry):
        if not geometry.is_convex(region):
            raise UsageError("sampling needs a convex region")
        self.schedule = ShellingSchedule(region, family, geometry)
        self.family = family

    def sample(self, seed: int, index: int = 0) -> Pattern:
        def chooser(step, options):
            return options[draw_index(seed, len(options), index, step)]

        return self.schedule.fill(chooser)


def sample_tep(
    region: Shape, family: TepFamily, geometry: ConvexGeometry, seed: int
) -> Pattern:
    """One uniform sample of the legal patterns on a convex region."""
    return TepSampler(region, family, geometry).sample(seed)


def extend_to_configuration(
    p: Pattern,
    family: TepFamily,
    geometry: ConvexGeometry,
    region: Shape,
    choice: str = "first",
    seed: int = 0,
) -> Pattern:
    """Extend a locally legal pattern on convex c to the convex region."""
    cset = set(p.domain.members)
    if not cset <= set(region.members):
        raise UsageError("extension region must contain the pattern domain")
    if not geometry.is_convex(p.domain) or not geometry.is_convex(region):
        raise UsageError("extension endpoints must be convex")
    if not is_locally_legal(p, family):
        raise UsageError("pattern is not locally legal")
    shelling = anti_shelling(geometry, p.domain, region)
    values = dict(p.as_dict())
    prefix = set(cset)
    for j, cell in enumerate(shelling.added):
        prefix.add(cell)
        translates = [
            tr
            for tr in _fitting_translates(prefix, family, [cell])
            if cell in tr
        ]
        options = _legal_symbols(values, cell, translates, family)
        if not options:
            raise PropertyViolationError(
                f"no legal extension at {cell!r}; family is not TEP here"
            )
        if choice == "first":
            values[cell] = options[0]
        else:
            values[cell] = options[draw_index(seed, len(options), j)]
    return Pattern(region, tuple(values[c] for c in region.members))

"""The independence solitaire: moves, components, and pattern transport.

A state is a finite support. A move picks a translate gS with all cells but
two corner cells a, b filled; exactly one of a, b is in the support, and the
move swaps which one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import List, Optional, Set, Tuple

from .errors import ResourceBudgetError, UsageError
from .families import Pattern, TepFamily
from .groups import Element, Group, Shape, shape


@dataclass(frozen=True)
class SupportConfig:
    """A finite support of cells, the solitaire's playing state."""

    support: Shape

    @property
    def group(self) -> Group:
        return self.support.group

    def to_json(self):
        return {"support": self.support.to_json()}


@dataclass(frozen=True)
class SolitaireMove:
    """Swap which of the corner cells a, b of the translate gS is filled."""

    g: Element
    a: Element
    b: Element

    def to_json(self, group: Group):
        enc = group.element_to_json
        return {"g": enc(self.g), "a": enc(self.a), "b": enc(self.b)}

    @staticmethod
    def from_json(data, group: Group) -> "SolitaireMove":
        dec = group.element_from_json
        return SolitaireMove(dec(data["g"]), dec(data["a"]), dec(data["b"]))


def default_corner_set(s: Shape, geometry=None) -> Shape:
    """The stock move-cell set: translated lax corners of the shape."""
    from .geometry import default_geometry, translated_lax_corners

    geo = geometry if geometry is not None else default_geometry(s.group)
    return translated_lax_corners(geo, s)


def _moves_from_support(support: Set[Element], s: Shape, t: Shape):
    grp = s.group
    t_members = t.members
    seen_g = set()
    out = []
    for d in support:
        for m in s.members:
            g = grp.mul(d, grp.inv(m))
            if g in seen_g:
                continue
            seen_g.add(g)
            cells = [grp.mul(g, x) for x in s.members]
            corner_cells = [grp.mul(g, x) for x in t_members]
            corner_set = set(corner_cells)
            rest_ok = all(
                c in support for c in cells if c not in corner_set
            )
            if not rest_ok:
                continue
            for i in range(len(corner_cells)):
                for j in range(i + 1, len(corner_cells)):
                    a, b = corner_cells[i], corner_cells[j]
                    others = [
                        c
                        for c in corner_cells
                        if c != a and c != b
                    ]
                    if any(c not in support for c in others):
                        continue
                    if (a in support) != (b in support):
                        out.append(SolitaireMove(g, a, b))
    return out


def legal_moves(y: SupportConfig, s: Shape, t: Optional[Shape] = None) -> List[SolitaireMove]:
    """All currently legal moves, in a canonical stable order."""
    if t is None:
        t = default_corner_set(s)
    if not set(t.members) <= set(s.members):
        raise UsageError("move cells must form a subset of the shape")
    if not t.members:
        raise UsageError("move cell set must be nonempty")
    grp = s.group
    moves = _moves_from_support(set(y.support.members), s, t)
    moves.sort(key=lambda m: (grp.key(m.g), grp.key(m.a), grp.key(m.b)))
    return moves


def is_legal_move(y: SupportConfig, move: SolitaireMove, s: Shape, t: Shape) -> bool:
    grp = s.group
    tset = {grp.mul(move.g, x) for x in t.members}
    if move.a == move.b or move.a not in tset or move.b not in tset:
        return False
    support = set(y.support.members)
    cells = [grp.mul(move.g, x) for x in s.members]
    for c in cells:
        if c in (move.a, move.b):
            continue
        if c not in support:
            return False
    return (move.a in support) != (move.b in support)


def apply_move(y: SupportConfig, move: SolitaireMove, s: Shape, t: Shape) -> SupportConfig:
    if not is_legal_move(y, move, s, t):
        raise UsageError("illegal solitaire move")
    support = set(y.support.members)
    if move.a in support:
        support.remove(move.a)
        support.add(move.b)
    else:
        support.remove(move.b)
        support.add(move.a)
    return SupportConfig(shape(s.group, support))


def component(
    y: SupportConfig,
    s: Shape,
    t: Optional[Shape] = None,
    limit: int = 10**6,
    collect_members: bool = False,
):
    """Breadth-first closure of the support under legal moves.

    Returns {"size", "exhausted", "members"?}; stops at the state budget
    with exhausted False.
    """
    if limit <= 0:
        raise UsageError("state budget must be positive")
    if t is None:
        t = default_corner_set(s)
    start = frozenset(y.support.members)
    visited = {start}
    queue = deque([start])
    exhausted = True
    while queue:
        cur = queue.popleft()
        for move in _moves_from_support(set(cur), s, t):
            if move.a in cur:
                nxt = frozenset(cur - {move.a} | {move.b})
            else:
                nxt = frozenset(cur - {move.b} | {move.a})
            if nxt in visited:
                continue
            if len(visited) >= limit:
                exhausted = False
                queue.clear()
                break
            visited.add(nxt)
            queue.append(nxt)
    report = {"size": len(visited), "exhausted": exhausted}
    if collect_members:
        report["members"] = sorted(
            (sorted(m, key=s.group.key) for m in visited),
            key=lambda ms: [s.group.key(g) for g in ms],
        )
    return report


def verify_independent(
    y: SupportConfig,
    family: TepFamily,
    geometry,
    budget: int = 10**7,
) -> bool:
    """Whether every symbol assignment on the support is globally legal."""
    from .tep import count_shape_bruteforce

    n = len(y.support)
    full = family.alphabet.size**n
    if full > budget:
        raise ResourceBudgetError(
            f"independence check needs {full} patterns, budget {budget}"
        )
    count = count_shape_bruteforce(y.support, family, geometry, budget=budget)
    return count == full


def transport_pattern(
    p: Pattern,
    y: SupportConfig,
    move: SolitaireMove,
    family: TepFamily,
    s: Shape,
    t: Shape,
) -> Pattern:
    """Carry a pattern on the support across a move.

    Values on the unchanged cells stay; the entering cell receives the
    unique symbol completing the moved translate. Transporting back
    restores the original pattern.
    """
    if family.k != 1:
        raise UsageError("pattern transport needs a 1-uniform family")
    if set(p.domain.members) != set(y.support.members):
        raise UsageError("pattern must live exactly on the support")
    if not is_legal_move(y, move, s, t):
        raise UsageError("illegal solitaire move")
    grp = s.group
    leaving, entering = (
        (move.a, move.b) if move.a in p.domain else (move.b, move.a)
    )
    values = dict(p.as_dict())
    translate = tuple(grp.mul(move.g, m) for m in family.shape.members)
    if set(translate) - {entering} - set(values) != set():
        raise UsageError("move translate is not determined by the support")
    # The entering cell completes the translate against the other |S|-1
    # cells, the leaving cell included; deleting it afterwards makes the
    # transport an involution.
    options = [
        x
        for x in range(family.alphabet.size)
        if family.allows(
            tuple(
                x if c == entering else values[c]
                for c in translate
            )
        )
    ]
    if len(options) != 1:
        raise UsageError(
            f"family is not 1-uniform at the entering cell: {len(options)} options"
        )
    del values[leaving]
    values[entering] = options[0]
    new_support = apply_move(y, move, s, t).support
    return Pattern(
        new_support, tuple(values[c] for c in new_support.members)
    )

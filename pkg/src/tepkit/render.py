"""Rendering of patterns and spacetime diagrams.

Z^2 patterns render to PBM/PPM/ASCII/PNG grids, free-group patterns to an
SVG tree with depth-shrinking edges. The palette is a fixed 12-color list
so outputs are reproducible.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .errors import UsageError
from .families import Pattern
from .groups import FreeGroup, LatticeGroup

PALETTE = (
    (0, 0, 0),
    (230, 230, 230),
    (214, 39, 40),
    (31, 119, 180),
    (44, 160, 44),
    (255, 127, 14),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (188, 189, 34),
    (23, 190, 207),
    (127, 127, 127),
)

ASCII_GLYPHS = ".#*ox+%@=~?&"


def grid_of(p: Pattern):
    """Row-major symbol grid of a Z^2 pattern, top row = largest y."""
    if not isinstance(p.domain.group, LatticeGroup) or p.domain.group.d != 2:
        raise UsageError("grid rendering needs a Z^2 pattern")
    if len(p.domain) == 0:
        return (0, 0), [[]]
    xs = [g[0] for g in p.domain.members]
    ys = [g[1] for g in p.domain.members]
    x0, y1 = min(xs), max(ys)
    width = max(xs) - x0 + 1
    height = y1 - min(ys) + 1
    rows: List[List[Optional[int]]] = [[None] * width for _ in range(height)]
    for (x, y), v in zip(p.domain.members, p.values):
        rows[y1 - y][x - x0] = v
    return (x0, y1), rows


def render_ascii(p: Pattern) -> str:
    _, rows = grid_of(p)
    lines = []
    for row in rows:
        lines.append(
            "".join(
                " " if v is None else ASCII_GLYPHS[v % len(ASCII_GLYPHS)]
                for v in row
            )
        )
    return "\n".join(lines) + "\n"


def render_pbm(p: Pattern) -> bytes:
    """Plain PBM; symbol 1 is black, everything else (and gaps) white."""
    _, rows = grid_of(p)
    height = len(rows)
    width = len(rows[0]) if rows else 0
    lines = [f"P1\n{width} {height}"]
    for row in rows:
        lines.append(" ".join("1" if v == 1 else "0" for v in row))
    return ("\n".join(lines) + "\n").encode()


def render_ppm(p: Pattern) -> bytes:
    """Plain PPM over the fixed palette; gaps render white."""
    _, rows = grid_of(p)
    height = len(rows)
    width = len(rows[0]) if rows else 0
    lines = [f"P3\n{width} {height}\n255"]
    for row in rows:
        parts = []
        for v in row:
            rgb = (255, 255, 255) if v is None else PALETTE[v % len(PALETTE)]
            parts.append(" ".join(str(c) for c in rgb))
        lines.append(" ".join(parts))
    return ("\n".join(lines) + "\n").encode()


def render_png(p: Pattern, path: str, cell_px: int = 4) -> None:
    """Palette-colored raster written through matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    _, rows = grid_of(p)
    height = len(rows)
    width = len(rows[0]) if rows else 0
    img = np.full((height, width, 3), 255, dtype=np.uint8)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v is not None:
                img[i, j] = PALETTE[v % len(PALETTE)]
    img = np.repeat(np.repeat(img, cell_px, axis=0), cell_px, axis=1)
    plt.imsave(path, img)


_DIRS = {"a": (1, 0), "A": (-1, 0), "b": (0, 1), "B": (0, -1)}


def _tree_position(word: str, base: float, shrink: float):
    x = y = 0.0
    step = base
    for c in word:
        dx, dy = _DIRS[c]
        x += dx * step
        y += dy * step
        step *= shrink
    return x, y


def render_tree_svg(
    p: Pattern, base: float = 120.0, shrink: float = 0.5, radius_scale: float = 0.12
) -> str:
    """SVG of a free-group pattern on the Cayley tree.

    Compass layout: a right, a^-1 left, b up, b^-1 down; each edge is the
    parent edge length times the shrink factor.
    """
    grp = p.domain.group
    if not isinstance(grp, FreeGroup) or grp.n != 2:
        raise UsageError("tree rendering supports rank-2 free groups")
    if not 0 < shrink < 1:
        raise UsageError("shrink factor must be in (0, 1)")
    pos = {w: _tree_position(w, base, shrink) for w in p.domain.members}
    size = 2 * base * (1 / (1 - shrink)) + 20
    half = size / 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{-half:.1f} '
        f'{-half:.1f} {size:.1f} {size:.1f}">'
    ]
    for w, (x, y) in sorted(pos.items()):
        if w:
            px, py = pos.get(w[:-1], _tree_position(w[:-1], base, shrink))
            parts.append(
                f'<line x1="{px:.2f}" y1="{-py:.2f}" x2="{x:.2f}" '
                f'y2="{-y:.2f}" stroke="#999" stroke-width="1"/>'
            )
    values = p.as_dict()
    for w, (x, y) in sorted(pos.items()):
        r = max(2.0, base * radius_scale * (shrink ** len(w)))
        rgb = PALETTE[values[w] % len(PALETTE)]
        color = "#%02x%02x%02x" % rgb
        parts.append(
            f'<circle cx="{x:.2f}" cy="{-y:.2f}" r="{r:.2f}" fill="{color}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# 1D cellular-automaton spacetime diagrams


def s3_symbols():
    """The symmetric group on three points as a multiplication table.

    Composition is (p * q)(i) = p(q(i)); labels follow cycle notation with
    index 0 the identity.
    """
    import itertools

    perms = list(itertools.permutations((0, 1, 2)))
    index = {q: i for i, q in enumerate(perms)}
    table = [
        [index[tuple(pp[qq[i]] for i in range(3))] for qq in perms]
        for pp in perms
    ]
    labels = [" ", "B", "A", "a", "b", "*"]
    return labels, table


def spacetime_rows(
    table: Sequence[Sequence[int]],
    initial: Dict[int, int],
    steps: int,
    window: Tuple[int, int],
) -> List[List[int]]:
    """Evolve row_{t+1}[i] = row_t[i-1] * row_t[i] downward.

    Cells outside the initial assignment start at the identity (symbol 0);
    the returned rows cover the half-open window of columns.
    """
    lo, hi = window
    if hi <= lo:
        raise UsageError("empty spacetime window")
    # Track extra columns on the left so influence can flow rightward.
    full_lo = min(lo, min(initial, default=lo))
    row = {i: initial.get(i, 0) for i in range(full_lo, hi)}
    out = [[row.get(i, 0) for i in range(lo, hi)]]
    for _ in range(steps):
        row = {
            i: table[row.get(i - 1, 0)][row.get(i, 0)]
            for i in range(full_lo, hi)
        }
        out.append([row.get(i, 0) for i in range(lo, hi)])
    return out


def spacetime_ascii(rows: List[List[int]], labels: Sequence[str]) -> str:
    return "\n".join("".join(labels[v] for v in row) for row in rows) + "\n"

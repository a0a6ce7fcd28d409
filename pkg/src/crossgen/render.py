"""Text and SVG renderings of a grid."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .clues import number_grid
from .grid import Grid

CELL = 32


def render_text(grid: Grid, solved: bool = True) -> str:
    """One line per row: letters (or ``.`` when unsolved) and ``#`` for black."""
    rows = grid.cell_rows()
    if not solved:
        rows = ["".join("#" if ch == "#" else "." for ch in row) for row in rows]
    return "\n".join(rows) + "\n"


def render_svg(grid: Grid, solved: bool = True, numbered: bool = True) -> str:
    numbers = number_grid(grid) if numbered else {}
    w, h = grid.cols * CELL, grid.rows * CELL
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="black"/>',
    ]
    for r in range(grid.rows):
        for c in range(grid.cols):
            ch = grid.letter(r, c)
            if not ch:
                continue
            x, y = c * CELL, r * CELL
            out.append(f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                       'fill="white" stroke="black" stroke-width="1"/>')
            if (r, c) in numbers:
                out.append(f'<text x="{x + 2}" y="{y + 10}" font-size="9" '
                           f'font-family="sans-serif">{numbers[(r, c)]}</text>')
            if solved:
                out.append(f'<text x="{x + CELL // 2}" y="{y + CELL - 8}" font-size="18" '
                           f'font-family="sans-serif" text-anchor="middle">{escape(ch)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

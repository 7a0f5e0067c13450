"""Deterministic hand-written SVG figures.

Every document starts with one generator comment line; the rest depends only
on the data.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .heisenberg import STEP, eta

CELL = 28
MARGIN = 40
PALETTE = ("#f7fbff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6",
           "#4292c6", "#2171b5", "#08519c", "#08306b")


def _doc(width: int, height: int, body: list[str], title: str) -> str:
    from . import __version__
    head = [
        f"<!-- generated by hbl {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _axes(x0: int, y0: int, nx: int, ny: int, lo_x: int, lo_y: int) -> list[str]:
    w, h = nx * CELL, ny * CELL
    out = [f'<line x1="{x0}" y1="{y0 + h}" x2="{x0 + w}" y2="{y0 + h}" stroke="black"/>',
           f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y0 + h}" stroke="black"/>']
    for i in range(nx):
        out.append(f'<text x="{x0 + i * CELL + CELL // 2}" y="{y0 + h + 14}" font-size="10" '
                   f'text-anchor="middle">{lo_x + i}</text>')
    for j in range(ny):
        out.append(f'<text x="{x0 - 6}" y="{y0 + h - j * CELL - CELL // 2 + 4}" font-size="10" '
                   f'text-anchor="end">{lo_y + j}</text>')
    return out


def grid_svg(values: dict, title: str) -> str:
    """Heatmap of ``(x, y) -> int`` with the value printed in each cell."""
    if not values:
        body = _axes(MARGIN, MARGIN, 1, 1, 0, 0)
        return _doc(2 * MARGIN + CELL, 2 * MARGIN + CELL, body, title)
    xs = [k[0] for k in values]
    ys = [k[1] for k in values]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    nx, ny = hi_x - lo_x + 1, hi_y - lo_y + 1
    vmax = max(values.values()) or 1
    vmin = min(values.values())
    body = _axes(MARGIN, MARGIN, nx, ny, lo_x, lo_y)
    for (x, y), v in sorted(values.items()):
        px = MARGIN + (x - lo_x) * CELL
        py = MARGIN + (hi_y - y) * CELL
        level = 0 if vmax == vmin else (v - vmin) * (len(PALETTE) - 1) // (vmax - vmin)
        ink = "white" if level > 4 else "black"
        body.append(f'<rect x="{px}" y="{py}" width="{CELL}" height="{CELL}" '
                    f'fill="{PALETTE[level]}" stroke="#999"/>')
        body.append(f'<text x="{px + CELL // 2}" y="{py + CELL // 2 + 4}" font-size="10" '
                    f'text-anchor="middle" fill="{ink}">{v}</text>')
    return _doc(nx * CELL + 2 * MARGIN, ny * CELL + 2 * MARGIN, body, title)


def eta_svg(n: int) -> str:
    """Column maxima of ``B_n(e)`` in H_3."""
    values = {(x, y): eta(n, x, y) for x in range(-n, n + 1) for y in range(-n, n + 1)
              if abs(x) + abs(y) <= n}
    return grid_svg(values, f"column heights of the {n}-ball")


def paths_svg(start: tuple[int, int], words: Sequence[Sequence[int]], title: str) -> str:
    """Planar projections of H_3 words (letters 1..4 = east, north, west, south)."""
    polys = []
    for w in words:
        x, y = start
        pts = [(x, y)]
        for i in w:
            dx, dy = STEP[i]
            x, y = x + dx, y + dy
            pts.append((x, y))
        polys.append(pts)
    allpts = [p for poly in polys for p in poly] or [start]
    lo_x = min(p[0] for p in allpts) - 1
    hi_x = max(p[0] for p in allpts) + 1
    lo_y = min(p[1] for p in allpts) - 1
    hi_y = max(p[1] for p in allpts) + 1
    nx, ny = hi_x - lo_x + 1, hi_y - lo_y + 1
    body = _axes(MARGIN, MARGIN, nx, ny, lo_x, lo_y)
    colours = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    for k, poly in enumerate(polys):
        off = (k - (len(polys) - 1) / 2) * 3
        coords = " ".join(
            f"{MARGIN + (x - lo_x) * CELL + CELL // 2 + off:g},"
            f"{MARGIN + (hi_y - y) * CELL + CELL // 2 + off:g}" for x, y in poly)
        body.append(f'<polyline points="{coords}" fill="none" stroke="{colours[k % len(colours)]}" '
                    f'stroke-width="2"/>')
    return _doc(nx * CELL + 2 * MARGIN, ny * CELL + 2 * MARGIN, body, title)


def window_svg(columns: dict, title: str) -> str:
    """Per-column ``IN`` height ranges of an H_3 window, shown as ``zmax``."""
    return grid_svg({k: v[1] for k, v in columns.items()}, title)


def write(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")

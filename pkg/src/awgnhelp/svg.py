"""Minimal single-panel SVG line plots for curve tables."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .core import ConfigError
from .sweeps import CurveTable

WIDTH, HEIGHT = 720, 460
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 20, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def _scale(lo: float, hi: float, log: bool, a: float, b: float):
    if log:
        lo, hi = math.log10(lo), math.log10(hi)
    if hi == lo:
        hi = lo + 1.0
    span = hi - lo

    def f(v):
        v = math.log10(v) if log else v
        return a + (v - lo) / span * (b - a)

    return f


def render_svg(table: CurveTable, log_x: bool = False, log_y: bool = False, title: str = "") -> str:
    """One polyline per series; infinite values become markers on the top edge."""
    if len(table.header) < 2:
        raise ConfigError("nothing to plot: the table has no series columns")
    xs = [r[0] for r in table.rows]
    finite = [v for r in table.rows for v in r[1:] if math.isfinite(v) and (v > 0 or not log_y)]
    if not finite or not xs:
        raise ConfigError("nothing to plot: no finite values")
    if log_x and min(xs) <= 0:
        raise ConfigError("log x axis needs positive axis values")
    sx = _scale(min(xs), max(xs), log_x, LEFT, WIDTH - RIGHT)
    sy = _scale(min(finite), max(finite), log_y, HEIGHT - BOTTOM, TOP)
    top = TOP
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="{LEFT}" y="{TOP}" width="{WIDTH - LEFT - RIGHT}" height="{HEIGHT - TOP - BOTTOM}" '
        'fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<title>{escape(title)}</title>')
    out.append(f'<text x="{(LEFT + WIDTH - RIGHT) / 2}" y="{HEIGHT - 12}" text-anchor="middle" '
               f'font-size="13">{escape(table.header[0])}</text>')
    out.append(f'<text x="{LEFT - 6}" y="{HEIGHT - BOTTOM}" text-anchor="end" font-size="11">'
               f'{min(finite):.3g}</text>')
    out.append(f'<text x="{LEFT - 6}" y="{TOP + 10}" text-anchor="end" font-size="11">'
               f'{max(finite):.3g}</text>')
    out.append(f'<text x="{LEFT}" y="{HEIGHT - BOTTOM + 16}" text-anchor="middle" font-size="11">'
               f'{min(xs):.3g}</text>')
    out.append(f'<text x="{WIDTH - RIGHT}" y="{HEIGHT - BOTTOM + 16}" text-anchor="middle" '
               f'font-size="11">{max(xs):.3g}</text>')
    for j, name in enumerate(table.header[1:], start=1):
        color = COLORS[(j - 1) % len(COLORS)]
        pts, clipped = [], []
        for r in table.rows:
            x, v = r[0], r[j]
            if v == math.inf:
                clipped.append(sx(x))
            elif math.isfinite(v) and (v > 0 or not log_y):
                pts.append(f"{sx(x):.2f},{sy(v):.2f}")
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                   f'data-series="{escape(name)}" points="{" ".join(pts)}"/>')
        for cx in clipped:
            out.append(f'<path class="clipped" d="M{cx - 4:.2f},{top + 8} L{cx + 4:.2f},{top + 8} '
                       f'L{cx:.2f},{top} Z" fill="{color}"/>')
        ly = TOP + 18 * j
        out.append(f'<line x1="{WIDTH - RIGHT + 10}" y1="{ly}" x2="{WIDTH - RIGHT + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - RIGHT + 35}" y="{ly + 4}" font-size="12">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

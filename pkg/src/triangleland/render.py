"""Deterministic SVG of the decorated shape sphere.

Orthographic projection along a view direction given in frame-1 Hopf
coordinates.  Drawn: the collinearity equator, the isosceles and regular
bimeridians, the three cap circles and the landmarks.  Arcs on the far side
are dashed.  Numbers are printed with fixed precision so the same flags give
byte-identical output.
"""
from __future__ import annotations

import numpy as np

from . import regions
from .kinematics import CLUSTERS
from .shape_map import landmarks

SIZE = 480
RADIUS = 200.0
N_SEG = 360

STYLE = {
    "equator": ("#000000", 1.6),
    "isosceles": ("#1f5fa8", 1.0),
    "regular": ("#2e8b3a", 1.0),
    "cap": ("#b8322a", 1.3),
}


def view_basis(view) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit view direction plus screen right and up vectors."""
    d = np.asarray(view, dtype=float)
    n = np.linalg.norm(d)
    if d.shape != (3,) or not np.isfinite(n) or n == 0.0:
        raise ValueError(f"bad view direction {view!r}")
    d = d / n
    # keep E at the top of the picture where possible
    up = np.array([0.0, 1.0, 0.0])
    if abs(d @ up) > 0.99:
        up = np.array([0.0, 0.0, 1.0])
    right = np.cross(up, d)
    right /= np.linalg.norm(right)
    return d, right, np.cross(d, right)


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _screen(pts, right, up):
    c = SIZE / 2.0
    return c + RADIUS * (pts @ right), c - RADIUS * (pts @ up)


def _runs(mask):
    """Split index range into maximal runs of equal mask value."""
    out, start = [], 0
    for i in range(1, len(mask) + 1):
        if i == len(mask) or mask[i] != mask[start]:
            out.append((start, i, bool(mask[start])))
            start = i
    return out


def _curve(curve, kind, d, right, up) -> list[str]:
    colour, width = STYLE[kind]
    pts = curve.param(np.linspace(0.0, 1.0, N_SEG + 1))
    x, y = _screen(pts, right, up)
    front = pts @ d >= 0.0
    out = []
    for a, b, vis in _runs(front):
        # overlap one point so front and back pieces join
        lo, hi = max(a - 1, 0), min(b + 1, len(pts))
        coords = " ".join(f"{_fmt(x[i])},{_fmt(y[i])}" for i in range(lo, hi))
        dash = "" if vis else ' stroke-dasharray="4,3" stroke-opacity="0.5"'
        out.append(f'<polyline class="{kind}" data-name="{curve.name}" points="{coords}" '
                   f'fill="none" stroke="{colour}" stroke-width="{width}"{dash}/>')
    return out


def render_svg(view=(1.0, 1.0, 1.0)) -> str:
    d, right, up = view_basis(view)
    c = SIZE / 2.0
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
        '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<title>shape sphere, view {",".join(_fmt(v) for v in d)}</title>',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        f'<circle cx="{_fmt(c)}" cy="{_fmt(c)}" r="{_fmt(RADIUS)}" fill="#f7f7f2" stroke="#444444" '
        'stroke-width="1"/>',
    ]
    lines += _curve(regions.equator(), "equator", d, right, up)
    for k in CLUSTERS:
        lines += _curve(regions.meridian(k, "isosceles"), "isosceles", d, right, up)
        lines += _curve(regions.meridian(k, "regular"), "regular", d, right, up)
        lines += _curve(regions.right_cap_boundary(k), "cap", d, right, up)

    for name, p in landmarks(1).items():
        v = p.xyz
        x, y = _screen(v, right, up)
        vis = v @ d >= 0.0
        fill = "#000000" if vis else "#ffffff"
        lines.append(f'<circle class="landmark" data-name="{name}" cx="{_fmt(x)}" cy="{_fmt(y)}" '
                     f'r="3.5" fill="{fill}" stroke="#000000" stroke-width="1"/>')
        if vis:
            lines.append(f'<text x="{_fmt(x + 6)}" y="{_fmt(y - 6)}" font-family="sans-serif" '
                         f'font-size="12">{name}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

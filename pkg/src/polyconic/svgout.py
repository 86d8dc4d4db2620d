"""Minimal SVG emission for traced curves and focal sets.

Coordinates use a fixed viewBox computed from the scene bounds with a 5%
margin; the y axis is flipped so the picture matches mathematical
orientation.  Only geometry and styles are written, no timestamps or other
volatile metadata.
"""

from __future__ import annotations

import numpy as np

from .scene import write_text_atomic


def _bounds(point_groups):
    pts = np.concatenate([np.asarray(g, dtype=float).reshape(-1, 2) for g in point_groups])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    lo = lo - 0.05 * span
    hi = hi + 0.05 * span
    return lo, hi


def _fmt(x: float) -> str:
    return f"{x:.8g}"


class SvgCanvas:
    """Collects curves and dots, then renders one standalone SVG."""

    def __init__(self, width: int = 640):
        self.width = width
        self._curves = []   # (vertices, closed, style)
        self._dots = []     # (points, radius_px, fill)

    def add_curve(self, vertices, closed=True, stroke="black", dashed=False, stroke_width=1.5):
        self._curves.append((np.asarray(vertices, dtype=float), closed, stroke, dashed, stroke_width))

    def add_dots(self, points, radius_px: float = 3.0, fill="black"):
        self._dots.append((np.atleast_2d(np.asarray(points, dtype=float)), radius_px, fill))

    def render(self) -> str:
        groups = [c[0] for c in self._curves] + [d[0] for d in self._dots]
        if not groups:
            raise ValueError("nothing to draw")
        lo, hi = _bounds(groups)
        span = hi - lo
        scale = self.width / span[0]
        height = max(int(round(span[1] * scale)), 1)

        def to_px(p):
            return (p[:, 0] - lo[0]) * scale, (hi[1] - p[:, 1]) * scale

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{height}" '
            f'viewBox="0 0 {self.width} {height}">',
            f'<rect width="{self.width}" height="{height}" fill="white"/>',
        ]
        for verts, closed, stroke, dashed, sw in self._curves:
            xs, ys = to_px(verts)
            coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
            tag = "polygon" if closed else "polyline"
            dash = ' stroke-dasharray="4 4"' if dashed else ""
            parts.append(
                f'<{tag} points="{coords}" fill="none" stroke="{stroke}" '
                f'stroke-width="{sw}"{dash}/>'
            )
        for pts, r, fill in self._dots:
            xs, ys = to_px(pts)
            for x, y in zip(xs, ys):
                parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{fill}"/>')
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    def write(self, path: str):
        write_text_atomic(path, self.render())

"""Minimal deterministic SVG writer for patches and fractal approximations.

Output is plain text assembled in input order with fixed formatting, so the
same scene always serializes to the same bytes.
"""

from __future__ import annotations

import math

# one fill color per face type, assigned in sorted type order
PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def type_colors(wtypes) -> dict:
    """Stable type -> color map; cycles the palette if needed."""
    return {
        t: PALETTE[i % len(PALETTE)]
        for i, t in enumerate(sorted(set(wtypes)))
    }


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("non-finite coordinate in SVG output")
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


class SvgScene:
    """Collects filled polygons and polylines, then writes one SVG document."""

    def __init__(self, stroke_width: float = 0.004):
        self.stroke_width = stroke_width
        self._items: list[str] = []
        self._xs: list[float] = []
        self._ys: list[float] = []

    def _track(self, points):
        for x, y in points:
            self._xs.append(float(x))
            self._ys.append(float(y))

    def add_polygon(self, points, fill: str, stroke: str = "#000000", opacity: float = 1.0):
        pts = [(float(x), float(y)) for x, y in points]
        self._track(pts)
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self._items.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{opacity:.3f}" '
            f'stroke="{stroke}" stroke-width="{self.stroke_width:.4f}"/>'
        )

    def add_polyline(self, points, stroke: str = "#000000", width: float | None = None):
        pts = [(float(x), float(y)) for x, y in points]
        self._track(pts)
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        w = self.stroke_width if width is None else width
        self._items.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{w:.4f}"/>'
        )

    def add_dot(self, x, y, r: float = 0.01, fill: str = "#000000"):
        self._track([(x, y)])
        self._items.append(
            f'<circle cx="{_fmt(float(x))}" cy="{_fmt(float(y))}" r="{r:.4f}" fill="{fill}"/>'
        )

    def tostring(self, size: int = 800) -> str:
        if not self._xs:
            xmin = ymin = -1.0
            xmax = ymax = 1.0
        else:
            xmin, xmax = min(self._xs), max(self._xs)
            ymin, ymax = min(self._ys), max(self._ys)
        pad = 0.05 * max(xmax - xmin, ymax - ymin, 1e-9)
        xmin, xmax = xmin - pad, xmax + pad
        ymin, ymax = ymin - pad, ymax + pad
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="{_fmt(xmin)} {_fmt(ymin)} {_fmt(xmax - xmin)} {_fmt(ymax - ymin)}">\n'
            # flip the y axis so mathematical orientation reads upward
            f'<g transform="translate(0,{_fmt(ymin + ymax)}) scale(1,-1)">\n'
        )
        return head + "\n".join(self._items) + "\n</g>\n</svg>\n"

    def write(self, path, size: int = 800) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.tostring(size))


def render_patch(patch, colors: dict | None = None) -> SvgScene:
    """Scene with one filled parallelogram per face of a patch."""
    scene = SvgScene()
    if colors is None:
        colors = type_colors(p.wtype for p in patch.polygons)
    for poly in sorted(patch.polygons, key=lambda p: (p.wtype, tuple(p.origin))):
        scene.add_polygon(poly.vertices(), fill=colors[poly.wtype])
    return scene


def render_point_clouds(clouds: dict, radius: float = 0.004) -> SvgScene:
    """Scene with one dot layer per labelled point cloud."""
    scene = SvgScene()
    colors = type_colors(clouds.keys())
    for label in sorted(clouds.keys()):
        for x, y in clouds[label]:
            scene.add_dot(x, y, r=radius, fill=colors[label])
    return scene

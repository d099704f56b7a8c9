"""Static figures: amoeba cloud plus tropical curve.

In the plane we write an SVG; in R^3 a JSON document with the three
coordinate-pair projections as point and polyline sets.  Vertex balls are
sup-norm balls, so they are drawn as squares.
"""

import xml.etree.ElementTree as ET

import numpy as np

from .errors import DimensionMismatch
from .geometry import Window, clip_segment


def _bbox(points, pad):
    lo = points.min(axis=0) - pad
    hi = points.max(axis=0) + pad
    return Window(lo, hi)


def curve_polylines(curve, window):
    """Edges and rays of the curve clipped to the window, as point pairs."""
    out = []
    for s, v, tm in zip(*curve.segments()):
        if not v.any():
            continue
        span = clip_segment(s, v, tm, window)
        if span is None:
            continue
        t0, t1 = span
        out.append(np.array([s + t0 * v, s + t1 * v]))
    return out


def _fmt(x):
    return f"{x:.6g}"


def svg_figure(points, curve, vertex_radius, size=600, point_radius=1.2):
    """SVG text for a planar cloud and curve; the viewport is the cloud's
    bounding box padded by ``vertex_radius``."""
    points = np.asarray(points, dtype=np.float64)
    if curve.n != 2 or points.shape[1] != 2:
        raise DimensionMismatch("SVG output needs n = 2")
    pad = max(float(vertex_radius), 1e-9)
    box = _bbox(np.vstack([points, curve.positions]), pad)
    w, h = box.hi - box.lo
    scale = size / max(w, h)

    def tx(p):
        return (p[0] - box.lo[0]) * scale, (box.hi[1] - p[1]) * scale

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=_fmt(w * scale),
        height=_fmt(h * scale),
        viewBox=f"0 0 {_fmt(w * scale)} {_fmt(h * scale)}",
    )
    cloud = ET.SubElement(svg, "g", id="cloud", fill="#9aa5b1")
    for p in points:
        x, y = tx(p)
        ET.SubElement(cloud, "circle", cx=_fmt(x), cy=_fmt(y), r=_fmt(point_radius))
    balls = ET.SubElement(svg, "g", id="vertex-balls", fill="none", stroke="#d08770")
    side = 2 * vertex_radius * scale
    for p in curve.positions:
        x, y = tx(p)
        ET.SubElement(
            balls, "rect", x=_fmt(x - side / 2), y=_fmt(y - side / 2), width=_fmt(side), height=_fmt(side)
        )
    lines = ET.SubElement(svg, "g", id="curve", stroke="#2e3440", fill="none")
    lines.set("stroke-width", "2")
    for seg in curve_polylines(curve, box):
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in map(tx, seg))
        ET.SubElement(lines, "polyline", points=pts)
    return ET.tostring(svg, encoding="unicode")


def projections(points, curve, vertex_radius):
    """The three coordinate-pair projections of a cloud and curve in R^3."""
    points = np.asarray(points, dtype=np.float64)
    if curve.n != 3 or points.shape[1] != 3:
        raise DimensionMismatch("projections need n = 3")
    box = _bbox(np.vstack([points, curve.positions]), max(float(vertex_radius), 1e-9))
    polys = curve_polylines(curve, box)
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out.append(
            {
                "pair": [i, j],
                "cloud": points[:, [i, j]].tolist(),
                "vertices": curve.positions[:, [i, j]].tolist(),
                "polylines": [seg[:, [i, j]].tolist() for seg in polys],
            }
        )
    return {"vertex_radius": float(vertex_radius), "projections": out}

"""Axis-aligned windows and sampling of curve images inside them."""

from dataclasses import dataclass

import numpy as np

from .errors import TropSpineError


@dataclass(frozen=True)
class Window:
    """Axis-aligned box ``[lo, hi]`` in R^n."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=np.float64).reshape(-1)
        hi = np.asarray(self.hi, dtype=np.float64).reshape(-1)
        if lo.shape != hi.shape or np.any(~np.isfinite(lo)) or np.any(~np.isfinite(hi)) or np.any(hi < lo):
            raise TropSpineError("a window needs finite bounds with lo <= hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, center, half_width):
        c = np.asarray(center, dtype=np.float64)
        return cls(c - half_width, c + half_width)

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    def contains(self, points, tol=0.0):
        points = np.atleast_2d(points)
        return np.all((points >= self.lo - tol) & (points <= self.hi + tol), axis=-1)

    def to_dict(self):
        return {"min": self.lo.tolist(), "max": self.hi.tolist()}


def clip_segment(start, vec, tmax, window):
    """Parameter interval ``[t0, t1]`` of ``start + t vec`` (t in [0, tmax]) inside the
    window, or None."""
    t0, t1 = 0.0, tmax
    for j in range(len(start)):
        if vec[j] == 0:
            if not window.lo[j] <= start[j] <= window.hi[j]:
                return None
            continue
        a = (window.lo[j] - start[j]) / vec[j]
        b = (window.hi[j] - start[j]) / vec[j]
        if a > b:
            a, b = b, a
        t0, t1 = max(t0, a), min(t1, b)
        if t0 > t1:
            return None
    return t0, t1


def mesh_curve(curve, window, step):
    """Points of the curve inside the window, spaced at most ``step`` apart in the
    sup norm along every edge and ray (clipped pieces include their endpoints)."""
    starts, vecs, tmax = curve.segments()
    out = []
    for s, v, tm in zip(starts, vecs, tmax):
        if not v.any():
            tm = 0.0  # a zero-direction end is just its vertex
        span = clip_segment(s, v, tm, window)
        if span is None:
            continue
        t0, t1 = span
        size = np.abs(v).max() * (t1 - t0)
        count = max(1, int(np.ceil(size / step))) if size > 0 else 0
        ts = np.linspace(t0, t1, count + 1)
        out.append(s[None, :] + ts[:, None] * v[None, :])
    if not out:
        return np.empty((0, curve.n))
    return np.concatenate(out)

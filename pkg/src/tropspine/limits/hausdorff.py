"""Hausdorff distance of closed sets restricted to a window, sup norm.

Operands are point sets ((N, n) arrays) or tropical curve images (a
:class:`TropicalCurve` or a list of them).  Curve images are clipped to the
window exactly; distances *to* a clipped image are exact, distances *from*
a clipped image are maximised over a mesh of step ``mesh_step`` along each
clipped segment, so that part is accurate to ``mesh_step / 2``.
"""

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..geometry import Window, clip_segment
from ..tropical import TropicalCurve


@dataclass(frozen=True)
class _Clipped:
    points: np.ndarray  # isolated points (clouds)
    starts: np.ndarray  # clipped segments s + t v, t in [0, 1]
    vecs: np.ndarray

    @property
    def empty(self):
        return len(self.points) == 0 and len(self.starts) == 0

    @property
    def is_cloud(self):
        return len(self.starts) == 0


def _clip(obj, window):
    n = len(window.lo)
    if isinstance(obj, TropicalCurve):
        obj = [obj]
    if isinstance(obj, (list, tuple)) and all(isinstance(c, TropicalCurve) for c in obj):
        starts, vecs = [], []
        for curve in obj:
            for s, v, tm in zip(*curve.segments()):
                if not v.any():
                    tm = 0.0
                span = clip_segment(s, v, tm, window)
                if span is None:
                    continue
                t0, t1 = span
                starts.append(s + t0 * v)
                vecs.append((t1 - t0) * v)
        return _Clipped(
            np.empty((0, n)),
            np.array(starts, dtype=np.float64).reshape(-1, n),
            np.array(vecs, dtype=np.float64).reshape(-1, n),
        )
    pts = np.asarray(obj, dtype=np.float64).reshape(-1, n)
    pts = pts[window.contains(pts)] if len(pts) else pts
    return _Clipped(pts, np.empty((0, n)), np.empty((0, n)))


def _mesh(c, step):
    out = [c.points]
    for s, v in zip(c.starts, c.vecs):
        size = float(np.abs(v).max())
        count = max(1, int(np.ceil(size / step)))
        ts = np.linspace(0.0, 1.0, count + 1)
        out.append(s[None, :] + ts[:, None] * v[None, :])
    return np.concatenate(out)


def _dist_to(queries, target):
    d = np.full(len(queries), np.inf)
    if len(target.points):
        d = np.minimum(d, kernels.nearest_distances(queries, target.points))
    if len(target.starts):
        tmax = np.ones(len(target.starts))
        d = np.minimum(d, kernels.segment_distances(queries, target.starts, target.vecs, tmax))
    return d


def _directed(a, b, step):
    queries = a.points if a.is_cloud else _mesh(a, step)
    if len(queries) == 0:
        return 0.0
    return float(_dist_to(queries, b).max())


@dataclass(frozen=True)
class HausdorffResult:
    distance: float
    error_bound: float


def hausdorff(a, b, window, mesh_step=None):
    """Like :func:`hausdorff_distance` but also returns the discretisation error bound."""
    if not isinstance(window, Window):
        window = Window(window["min"], window["max"])
    if mesh_step is None:
        mesh_step = max(float((window.hi - window.lo).max()) / 2000.0, 1e-6)
    ca, cb = _clip(a, window), _clip(b, window)
    if ca.empty and cb.empty:
        return HausdorffResult(0.0, 0.0)
    if ca.empty or cb.empty:
        return HausdorffResult(float("inf"), 0.0)
    d = max(_directed(ca, cb, mesh_step), _directed(cb, ca, mesh_step))
    err = 0.0 if (ca.is_cloud and cb.is_cloud) else mesh_step / 2.0
    return HausdorffResult(d, err)


def hausdorff_distance(a, b, window, mesh_step=None):
    """``d(A cap K, B cap K)`` in the sup norm: infinity if exactly one side is
    empty, 0 if both are."""
    return hausdorff(a, b, window, mesh_step).distance

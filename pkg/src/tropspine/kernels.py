"""Sup-norm distance kernels.

Two hot loops dominate certification and Hausdorff computations:

* ``segment_distances``: for every query point, the exact minimum over a set
  of parametrised segments/rays ``s + t*v, t in [0, tmax]`` of the
  sup-norm distance.  Per segment the objective ``max_j |c_j + t v_j|`` is
  convex and piecewise linear in ``t``, so its minimum sits at an endpoint
  or at one of the O(n^2) breakpoints; we evaluate all of them.
* ``nearest_distances``: sup-norm distance from each query to the nearest
  point of a cloud.

Each kernel has a numba implementation and a numpy/scipy implementation.
For ``segment_distances`` the numba path is used when numba imports and
``TROPSPINE_DISABLE_NUMBA`` is unset (or ``0``).  ``nearest_distances``
defaults to the k-d tree, which beats the compiled sweep on every workload
we measured; pass ``use_numba=True`` to force the sweep.  ``TROPSPINE_NUM_THREADS`` caps numba's thread pool.
Both paths return bit-identical results.
"""

import os

import numpy as np
from scipy.spatial import cKDTree

# numba probes TBB by default and warns on older system TBB builds
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

_DISABLED = os.environ.get("TROPSPINE_DISABLE_NUMBA", "0") not in ("", "0", "false", "False")

try:
    import numba
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _DISABLED

if HAS_NUMBA and os.environ.get("TROPSPINE_NUM_THREADS"):
    numba.set_num_threads(int(os.environ["TROPSPINE_NUM_THREADS"]))


def backend():
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path


def _candidates_numpy(c, v, tmax):
    # c: (P, n) offsets start - x, v: (n,) direction
    n = v.shape[0]
    cols = [np.zeros(c.shape[0])]
    if np.isfinite(tmax):
        cols.append(np.full(c.shape[0], tmax))
    with np.errstate(divide="ignore", invalid="ignore"):
        for j in range(n):
            if v[j] != 0.0:
                cols.append(-c[:, j] / v[j])
            for l in range(j + 1, n):
                d = v[j] - v[l]
                if d != 0.0:
                    cols.append((c[:, l] - c[:, j]) / d)
                s = v[j] + v[l]
                if s != 0.0:
                    cols.append(-(c[:, j] + c[:, l]) / s)
    t = np.stack(cols, axis=1)
    return np.clip(t, 0.0, tmax)


def _segment_distances_numpy(points, starts, vecs, tmax, chunk=4096):
    points = np.ascontiguousarray(points, dtype=np.float64)
    out = np.full(points.shape[0], np.inf)
    for lo in range(0, points.shape[0], chunk):
        x = points[lo:lo + chunk]
        best = out[lo:lo + chunk]
        for s, v, tm in zip(starts, vecs, tmax):
            c = s[None, :] - x
            t = _candidates_numpy(c, v, tm)
            vals = np.abs(c[:, None, :] + t[:, :, None] * v[None, None, :]).max(axis=2)
            np.minimum(best, vals.min(axis=1), out=best)
    return out


def _nearest_distances_numpy(queries, cloud):
    tree = cKDTree(cloud)
    d, _ = tree.query(queries, k=1, p=np.inf)
    return np.asarray(d, dtype=np.float64)


# ---------------------------------------------------------------- numba path

if HAS_NUMBA:

    @njit(cache=True)
    def _seg_value(c, v, t):
        m = 0.0
        for j in range(c.shape[0]):
            a = abs(c[j] + t * v[j])
            if a > m:
                m = a
        return m

    @njit(cache=True)
    def _clip(t, tmax):
        if t < 0.0:
            return 0.0
        if t > tmax:
            return tmax
        return t

    @njit(cache=True)
    def _seg_min(c, v, tmax):
        n = c.shape[0]
        best = _seg_value(c, v, 0.0)
        if tmax < np.inf:
            val = _seg_value(c, v, tmax)
            if val < best:
                best = val
        for j in range(n):
            if v[j] != 0.0:
                val = _seg_value(c, v, _clip(-c[j] / v[j], tmax))
                if val < best:
                    best = val
            for l in range(j + 1, n):
                d = v[j] - v[l]
                if d != 0.0:
                    val = _seg_value(c, v, _clip((c[l] - c[j]) / d, tmax))
                    if val < best:
                        best = val
                s = v[j] + v[l]
                if s != 0.0:
                    val = _seg_value(c, v, _clip(-(c[j] + c[l]) / s, tmax))
                    if val < best:
                        best = val
        return best

    @njit(parallel=True, cache=True)
    def _segment_distances_numba(points, starts, vecs, tmax):
        P = points.shape[0]
        S = starts.shape[0]
        n = points.shape[1]
        out = np.empty(P)
        for i in prange(P):
            c = np.empty(n)
            best = np.inf
            for s in range(S):
                for j in range(n):
                    c[j] = starts[s, j] - points[i, j]
                val = _seg_min(c, vecs[s], tmax[s])
                if val < best:
                    best = val
            out[i] = best
        return out

    @njit(cache=True)
    def _sup_dist(a, b, bound):
        m = 0.0
        for j in range(a.shape[0]):
            d = abs(a[j] - b[j])
            if d > m:
                m = d
                if m >= bound:
                    break
        return m

    @njit(parallel=True, cache=True)
    def _nearest_distances_numba(queries, cloud):
        # cloud is sorted by its first coordinate; sweep outward from each
        # query's insertion point until that coordinate alone exceeds the best.
        Q = queries.shape[0]
        N = cloud.shape[0]
        keys = cloud[:, 0]
        out = np.empty(Q)
        for i in prange(Q):
            q = queries[i]
            mid = np.searchsorted(keys, q[0])
            best = np.inf
            lo = mid - 1
            hi = mid
            while lo >= 0 or hi < N:
                if hi < N:
                    if keys[hi] - q[0] >= best:
                        hi = N
                    else:
                        d = _sup_dist(cloud[hi], q, best)
                        if d < best:
                            best = d
                        hi += 1
                if lo >= 0:
                    if q[0] - keys[lo] >= best:
                        lo = -1
                    else:
                        d = _sup_dist(cloud[lo], q, best)
                        if d < best:
                            best = d
                        lo -= 1
            out[i] = best
        return out


# ---------------------------------------------------------------- dispatch


def _as2d(a, n=None):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(-1, n if n is not None else a.shape[0])
    return a


def segment_distances(points, starts, vecs, tmax, use_numba=None):
    """Exact sup-norm distance from each point to the union of segments.

    ``starts`` and ``vecs`` are (S, n); segment s is ``starts[s] + t*vecs[s]``
    for ``t`` in ``[0, tmax[s]]`` (``tmax`` may be ``inf`` for rays).
    Returns ``inf`` for every point when there are no segments.
    """
    points = _as2d(points)
    starts = _as2d(starts, points.shape[1])
    vecs = _as2d(vecs, points.shape[1])
    tmax = np.ascontiguousarray(tmax, dtype=np.float64).reshape(-1)
    if points.shape[0] == 0:
        return np.empty(0)
    if starts.shape[0] == 0:
        return np.full(points.shape[0], np.inf)
    if USE_NUMBA if use_numba is None else use_numba:
        return _segment_distances_numba(points, starts, vecs, tmax)
    return _segment_distances_numpy(points, starts, vecs, tmax)


def nearest_distances(queries, cloud, use_numba=None):
    """Sup-norm distance from each query point to its nearest cloud point.

    ``use_numba=None`` means the k-d tree; only an explicit ``True`` (with
    numba available) selects the sorted sweep.
    """
    queries = _as2d(queries)
    cloud = _as2d(cloud, queries.shape[1])
    if queries.shape[0] == 0:
        return np.empty(0)
    if cloud.shape[0] == 0:
        return np.full(queries.shape[0], np.inf)
    if use_numba and HAS_NUMBA:
        order = np.argsort(cloud[:, 0], kind="stable")
        return _nearest_distances_numba(queries, np.ascontiguousarray(cloud[order]))
    return _nearest_distances_numpy(queries, cloud)

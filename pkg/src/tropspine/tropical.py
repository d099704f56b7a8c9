"""Rational tropical curves: labelled metric trees with an affine, balanced map to R^n.

A curve is stored as its combinatorial tree, positive (or zero) lengths for the
bounded edges, integer directions for every edge and leaf, and the image of a
single base vertex.  Positions of all other vertices follow from unit-speed
travel: ``h(v) = h(u) + l(e) * d(u -> v)``.

Lines (curves of degree ``line_degree(n)``) get extra operations: local
coordinates, linear modification and contraction.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import kernels
from .degrees import ToricDegree, line_degree
from .errors import InconsistentDegree, PointNotOnLine, TropSpineError

ON_IMAGE_TOL = 1e-12


@dataclass(frozen=True)
class CombinatorialTree:
    """Vertices ``0..n_vertices-1``, bounded ``edges`` as (u, v) pairs and
    ``leaves[label] = vertex`` for the half-edges going off to the ends."""

    n_vertices: int
    edges: tuple
    leaves: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "leaves", tuple(int(v) for v in self.leaves))
        if self.n_vertices < 1:
            raise TropSpineError("a tree needs at least one vertex")
        if len(self.edges) != self.n_vertices - 1:
            raise TropSpineError("a tree on V vertices has V - 1 bounded edges")
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices) or u == v:
                raise TropSpineError(f"bad edge ({u}, {v})")
        for v in self.leaves:
            if not 0 <= v < self.n_vertices:
                raise TropSpineError(f"leaf attached to missing vertex {v}")
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for _, w in self.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != self.n_vertices:
            raise TropSpineError("tree is not connected")

    @cached_property
    def adjacency(self):
        """``adjacency[v]`` lists ``(edge_index, neighbour)``."""
        adj = [[] for _ in range(self.n_vertices)]
        for j, (u, v) in enumerate(self.edges):
            adj[u].append((j, v))
            adj[v].append((j, u))
        return adj

    @cached_property
    def leaves_at(self):
        out = [[] for _ in range(self.n_vertices)]
        for label, v in enumerate(self.leaves):
            out[v].append(label)
        return out

    def valence(self, v):
        return len(self.adjacency[v]) + len(self.leaves_at[v])

    @cached_property
    def splits(self):
        """``splits[j]`` is the frozenset of leaf labels on the ``v`` side of edge j = (u, v)."""
        out = []
        for j, (u, v) in enumerate(self.edges):
            out.append(frozenset(self.side(v, j)))
        return out

    def side(self, start, cut_edge):
        """Leaf labels reachable from ``start`` without crossing ``cut_edge``."""
        labels = []
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            labels.extend(self.leaves_at[x])
            for j, y in self.adjacency[x]:
                if j != cut_edge and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return labels

    def path_edges(self, a, b):
        """Oriented edges ``(edge_index, sign)`` along the path a -> b; sign +1 means u -> v."""
        parent = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                break
            for j, y in self.adjacency[x]:
                if y not in parent:
                    parent[y] = (x, j)
                    queue.append(y)
        path = []
        x = b
        while parent[x] is not None:
            prev, j = parent[x]
            path.append((j, 1 if self.edges[j] == (prev, x) else -1))
            x = prev
        return path[::-1]

    def bfs_order(self, root):
        """Vertices in BFS order from ``root`` with the edge used to reach each."""
        order = [(root, None, None)]
        seen = {root}
        i = 0
        while i < len(order):
            x = order[i][0]
            for j, y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    order.append((y, x, j))
            i += 1
        return order

    def canonical_key(self):
        """Label-aware, vertex-numbering-free identity: the set of splits, each
        normalised to the side not containing leaf 0, plus leaf groupings at
        vertices (needed to tell apart higher-valent vertices)."""
        splits = []
        for s in self.splits:
            if 0 in s:
                s = frozenset(range(len(self.leaves))) - s
            splits.append(s)
        return frozenset(splits), len(self.leaves)

    def is_stable(self):
        return all(self.valence(v) >= 3 for v in range(self.n_vertices)) or (
            self.n_vertices == 1 and len(self.leaves) == 2
        )


def directions_from_degree(tree, degree):
    """Balancing forces ``d(u -> v)`` to be the sum of degree vectors over leaves on the v side."""
    if len(tree.leaves) != len(degree):
        raise InconsistentDegree(f"tree has {len(tree.leaves)} leaves, degree has {len(degree)} vectors")
    arr = degree.array
    edge_dirs = np.zeros((len(tree.edges), degree.n), dtype=np.int64)
    for j, s in enumerate(tree.splits):
        if s:
            edge_dirs[j] = arr[sorted(s)].sum(axis=0)
    return edge_dirs, arr.copy()


@dataclass(frozen=True, eq=False)
class ModuliPoint:
    """A point of the chart R^n x R_{>=0}^{#edges} for type ``tree`` and ``degree``."""

    degree: ToricDegree
    tree: CombinatorialTree
    base_vertex: int
    position: np.ndarray
    lengths: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=np.float64).copy())
        object.__setattr__(self, "lengths", np.asarray(self.lengths, dtype=np.float64).reshape(-1).copy())
        if np.any(self.lengths < 0):
            raise TropSpineError("moduli lengths must be non-negative")
        if self.position.shape != (self.degree.n,):
            raise TropSpineError("position has the wrong dimension")
        if self.lengths.shape[0] != len(self.tree.edges):
            raise TropSpineError("one length per bounded edge is required")

    @property
    def dimension(self):
        if self.is_segment_type():
            return self.degree.n - (1 if any(self.degree[0]) else 0)
        return self.degree.n + len(self.tree.edges)

    def is_segment_type(self):
        return self.tree.n_vertices == 1 and len(self.tree.leaves) == 2

    def canonical(self):
        """For the two-leaf type the position only matters modulo R*delta; pick the
        representative whose coordinate at the largest |delta_j| vanishes."""
        if not self.is_segment_type():
            return self
        d = np.array(self.degree[0], dtype=np.float64)
        if not d.any():
            return self
        j = int(np.argmax(np.abs(d)))
        pos = self.position - (self.position[j] / d[j]) * d
        pos[j] = 0.0
        return ModuliPoint(self.degree, self.tree, self.base_vertex, pos, self.lengths)

    def coordinates(self):
        return np.concatenate([self.position, self.lengths])


@dataclass(frozen=True, eq=False)
class TropicalCurve:
    degree: ToricDegree
    tree: CombinatorialTree
    lengths: np.ndarray
    edge_directions: np.ndarray
    leaf_directions: np.ndarray
    base_vertex: int
    base_position: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lengths", np.asarray(self.lengths, dtype=np.float64).reshape(-1))
        n = self.degree.n
        object.__setattr__(
            self, "edge_directions", np.asarray(self.edge_directions, dtype=np.int64).reshape(-1, n)
        )
        object.__setattr__(
            self, "leaf_directions", np.asarray(self.leaf_directions, dtype=np.int64).reshape(-1, n)
        )
        object.__setattr__(self, "base_position", np.asarray(self.base_position, dtype=np.float64))

    @property
    def n(self):
        return self.degree.n

    @cached_property
    def positions(self):
        pos = np.empty((self.tree.n_vertices, self.n))
        pos[self.base_vertex] = self.base_position
        for v, u, j in self.tree.bfs_order(self.base_vertex)[1:]:
            sign = 1 if self.tree.edges[j] == (u, v) else -1
            pos[v] = pos[u] + self.lengths[j] * (sign * self.edge_directions[j])
        return pos

    def segments(self):
        """``(starts, vecs, tmax)`` for the kernels: bounded edges as t in [0, 1],
        leaves as rays t in [0, inf)."""
        pos = self.positions
        starts, vecs, tmax = [], [], []
        for (u, v) in self.tree.edges:
            starts.append(pos[u])
            vecs.append(pos[v] - pos[u])
            tmax.append(1.0)
        for label, v in enumerate(self.tree.leaves):
            starts.append(pos[v])
            vecs.append(self.leaf_directions[label].astype(np.float64))
            tmax.append(np.inf)
        return (
            np.array(starts, dtype=np.float64).reshape(-1, self.n),
            np.array(vecs, dtype=np.float64).reshape(-1, self.n),
            np.array(tmax, dtype=np.float64),
        )

    def translated(self, shift):
        return TropicalCurve(
            self.degree,
            self.tree,
            self.lengths,
            self.edge_directions,
            self.leaf_directions,
            self.base_vertex,
            self.base_position + np.asarray(shift, dtype=np.float64),
        )

    def rescaled(self, factor):
        """The image scaled by ``factor > 0`` (lengths and positions scale, directions don't)."""
        return TropicalCurve(
            self.degree,
            self.tree,
            self.lengths * factor,
            self.edge_directions,
            self.leaf_directions,
            self.base_vertex,
            self.base_position * factor,
        )

    def vertex_positions(self):
        return self.positions


def from_moduli(point):
    tree, degree = point.tree, point.degree
    edge_dirs, leaf_dirs = directions_from_degree(tree, degree)
    return TropicalCurve(
        degree, tree, point.lengths.copy(), edge_dirs, leaf_dirs, point.base_vertex, point.position.copy()
    )


def to_moduli(curve):
    return ModuliPoint(curve.degree, curve.tree, curve.base_vertex, curve.base_position.copy(), curve.lengths.copy())


def check_balancing(curve):
    """Exact integer balancing at every vertex, plus leaf directions matching the degree."""
    n = curve.n
    if not np.array_equal(curve.leaf_directions, curve.degree.array):
        return False
    total = np.zeros((curve.tree.n_vertices, n), dtype=np.int64)
    for label, v in enumerate(curve.tree.leaves):
        total[v] += curve.leaf_directions[label]
    for j, (u, v) in enumerate(curve.tree.edges):
        total[u] += curve.edge_directions[j]
        total[v] -= curve.edge_directions[j]
    return not total.any()


def distances_to_image(curve, points):
    starts, vecs, tmax = curve.segments()
    return kernels.segment_distances(np.atleast_2d(points), starts, vecs, tmax)


def distance_to_image(curve, x):
    return float(distances_to_image(curve, np.asarray(x, dtype=np.float64).reshape(1, -1))[0])


# ------------------------------------------------------------------ lines


def is_line(curve):
    return curve.degree == line_degree(curve.n)


def is_calibrated(curve, tol=ON_IMAGE_TOL):
    """Leaf 0 lies on R*(1,...,1)."""
    p = curve.positions[curve.tree.leaves[0]]
    return bool(np.ptp(p) <= tol * max(1.0, np.abs(p).max()))


def is_injective(curve, tol=ON_IMAGE_TOL):
    pos = curve.positions
    V = len(pos)
    for a in range(V):
        for b in range(a + 1, V):
            if np.abs(pos[a] - pos[b]).max() <= tol:
                return False
    return True


class CurvePoint(NamedTuple):
    """A point of the tree: ``kind`` is 'vertex', 'edge' or 'leaf'; ``t`` is the
    distance (in the tree metric) from the vertex ``u`` of the edge, or from the
    leaf's vertex."""

    kind: str
    index: int
    t: float


def locate(curve, x, tol=ON_IMAGE_TOL):
    x = np.asarray(x, dtype=np.float64)
    pos = curve.positions
    scale = max(1.0, float(np.abs(x).max()))
    d = np.abs(pos - x).max(axis=1)
    if len(d) and d.min() <= tol * scale:
        return CurvePoint("vertex", int(np.argmin(d)), 0.0)
    best = None
    for j, (u, v) in enumerate(curve.tree.edges):
        L = curve.lengths[j]
        dirs = curve.edge_directions[j].astype(np.float64)
        t = _project_param(pos[u], dirs, x, 0.0, L)
        err = np.abs(pos[u] + t * dirs - x).max()
        if best is None or err < best[0]:
            best = (err, CurvePoint("edge", j, t))
    for label, v in enumerate(curve.tree.leaves):
        dirs = curve.leaf_directions[label].astype(np.float64)
        t = _project_param(pos[v], dirs, x, 0.0, np.inf)
        err = np.abs(pos[v] + t * dirs - x).max()
        if best is None or err < best[0]:
            best = (err, CurvePoint("leaf", label, t))
    if best is None or best[0] > tol * scale:
        raise PointNotOnLine(f"point {x.tolist()} is not on the curve (off by {best[0] if best else 'inf'})")
    return best[1]


def _project_param(start, direction, x, lo, hi):
    # least sup-norm parameter; on-image points give an exact hit
    nz = np.flatnonzero(direction)
    if len(nz) == 0:
        return lo
    j = nz[np.argmax(np.abs(direction[nz]))]
    t = (x[j] - start[j]) / direction[j]
    return float(min(max(t, lo), hi))


def local_coordinates(line, p, tol=ON_IMAGE_TOL):
    """Coordinates (1-based) with entry 1 in the direction from p towards end 0."""
    tree = line.tree
    loc = locate(line, p, tol)
    if loc.kind == "leaf":
        if loc.index == 0:
            d = line.leaf_directions[0]
        else:
            d = -line.leaf_directions[loc.index]
            if loc.t == 0.0:
                d = _towards_end0_from_vertex(line, tree.leaves[loc.index])
    elif loc.kind == "edge":
        j = loc.index
        d = line.edge_directions[j] if 0 in tree.splits[j] else -line.edge_directions[j]
    else:
        d = _towards_end0_from_vertex(line, loc.index)
    return sorted(int(i) + 1 for i in np.flatnonzero(d == 1))


def _towards_end0_from_vertex(line, v):
    tree = line.tree
    if tree.leaves[0] == v:
        return line.leaf_directions[0]
    for j, w in tree.adjacency[v]:
        s = tree.splits[j]
        on_w_side = tree.edges[j][1] == w
        if (0 in s) == on_w_side:
            return line.edge_directions[j] * (1 if on_w_side else -1)
    raise TropSpineError("no path to end 0")  # pragma: no cover


def real_line(position=0.0):
    """The line in R^1 (a single vertex carrying leaves 0 and 1)."""
    tree = CombinatorialTree(1, (), (0, 0))
    return from_moduli(ModuliPoint(line_degree(1), tree, 0, [position], []))


def _suppress_two_valent(n_vertices, edges, lengths, leaves, base):
    """Merge away 2-valent vertices (except a lone vertex with two leaves).
    Returns renumbered (n_vertices, edges, lengths, leaves, base_or_None, old->new)."""
    edges = [list(e) for e in edges]
    lengths = list(lengths)
    leaves = list(leaves)
    alive = [True] * n_vertices
    removed_base = False
    changed = True
    while changed:
        changed = False
        for v in range(n_vertices):
            if not alive[v]:
                continue
            inc = [j for j, e in enumerate(edges) if e is not None and v in e]
            lv = [i for i, w in enumerate(leaves) if w == v]
            if len(inc) + len(lv) != 2 or (not inc):
                continue
            if len(inc) == 2:
                j1, j2 = inc
                a = edges[j1][0] if edges[j1][1] == v else edges[j1][1]
                b = edges[j2][0] if edges[j2][1] == v else edges[j2][1]
                edges[j1] = [a, b]
                lengths[j1] = lengths[j1] + lengths[j2]
                edges[j2] = None
            else:
                (j,) = inc
                other = edges[j][0] if edges[j][1] == v else edges[j][1]
                leaves[lv[0]] = other
                edges[j] = None
            alive[v] = False
            removed_base |= v == base
            changed = True
    remap = {}
    for v in range(n_vertices):
        if alive[v]:
            remap[v] = len(remap)
    new_edges, new_lengths = [], []
    for e, L in zip(edges, lengths):
        if e is not None:
            new_edges.append((remap[e[0]], remap[e[1]]))
            new_lengths.append(L)
    new_leaves = [remap[v] for v in leaves]
    new_base = None if removed_base else remap[base]
    return len(remap), new_edges, new_lengths, new_leaves, new_base, remap


def modify_line(line, p, height, tol=ON_IMAGE_TOL):
    """Linear modification along ``p`` of the given height: the line in R^{n+1}
    containing the graph of ``height + max(x_i - p_i, 0)`` (x_i a local
    coordinate at p) with a new end n+1 pointing in direction -e_{n+1} at (p, height)."""
    if not is_line(line):
        raise TropSpineError("modify_line expects a tropical line")
    p = np.asarray(p, dtype=np.float64)
    n = line.n
    loc = locate(line, p, tol)
    coords = local_coordinates(line, p, tol)
    i = coords[0] - 1
    tree = line.tree
    V = tree.n_vertices
    edges = list(tree.edges)
    lengths = list(line.lengths)
    leaves = list(tree.leaves)
    if loc.kind == "vertex":
        w = loc.index
    elif loc.kind == "edge":
        j = loc.index
        u, v = edges[j]
        L = lengths[j]
        t = min(max(loc.t, 0.0), L)
        w = V
        V += 1
        edges[j] = (u, w)
        lengths[j] = t
        edges.append((w, v))
        lengths.append(L - t)
    else:
        label = loc.index
        u = leaves[label]
        w = V
        V += 1
        edges.append((u, w))
        lengths.append(loc.t)
        leaves[label] = w
    leaves.append(w)

    old_pos = line.positions
    base = line.base_vertex
    V, edges, lengths, leaves, new_base, remap = _suppress_two_valent(V, edges, lengths, leaves, base)
    if new_base is not None:
        x = old_pos[base]
        base_pos = np.append(x, height + max(x[i] - p[i], 0.0))
    else:
        new_base = remap[w]
        base_pos = np.append(p, height)
    tree = CombinatorialTree(V, tuple(edges), tuple(leaves))
    point = ModuliPoint(line_degree(n + 1), tree, new_base, base_pos, lengths)
    return from_moduli(point)


class Contraction(NamedTuple):
    line: TropicalCurve
    point: np.ndarray
    height: float


def contract_line(line):
    """Forget the last coordinate. Returns the contracted line, the image ``p`` of
    the contracted leaf and the height at which that leaf was attached, so that
    ``modify_line(line', p, height)`` rebuilds the input."""
    if not is_line(line):
        raise TropSpineError("contract_line expects a tropical line")
    n = line.n
    if n < 2:
        raise TropSpineError("cannot contract a line in R^1")
    tree = line.tree
    pos = line.positions
    w = tree.leaves[n]
    p = pos[w][: n - 1].copy()
    height = float(pos[w][n - 1])
    base = line.base_vertex
    V, edges, lengths, leaves, new_base, remap = _suppress_two_valent(
        tree.n_vertices, tree.edges, line.lengths, tree.leaves[:n], base
    )
    if new_base is None:
        survivor = next(iter(remap))
        new_base, base_pos = remap[survivor], pos[survivor][: n - 1].copy()
    else:
        base_pos = pos[base][: n - 1].copy()
    new_tree = CombinatorialTree(V, tuple(edges), tuple(leaves))
    point = ModuliPoint(line_degree(n - 1), new_tree, new_base, base_pos, lengths)
    return Contraction(from_moduli(point), p, height)


def same_curve(a, b, tol=1e-12):
    """Equality up to renumbering of vertices and edges: same degree, and the
    same set of (leaf label -> vertex position) and (split -> length) data."""
    if a.degree != b.degree:
        return False
    ka, kb = _geometry_key(a), _geometry_key(b)
    if set(ka[0]) != set(kb[0]):
        return False
    for s, L in ka[0].items():
        if abs(L - kb[0][s]) > tol * max(1.0, abs(L)):
            return False
    for pa, pb in zip(ka[1], kb[1]):
        if np.abs(pa - pb).max() > tol * max(1.0, np.abs(pa).max()):
            return False
    return True


def _geometry_key(curve):
    key, k = curve.tree.canonical_key()
    lengths = {}
    for j, s in enumerate(curve.tree.splits):
        if 0 in s:
            s = frozenset(range(k)) - s
        lengths[s] = float(curve.lengths[j])
    pos = curve.positions
    return lengths, [pos[v] for v in curve.tree.leaves]

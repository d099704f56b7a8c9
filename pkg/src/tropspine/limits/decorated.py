"""Trees with labelled leaves decorated by a toric degree."""

from dataclasses import dataclass

import numpy as np

from ..degrees import ToricDegree
from ..errors import LeafCountMismatch, TropSpineError
from ..tropical import CombinatorialTree


@dataclass(frozen=True, eq=False)
class DecoratedTree:
    """``decorations[j]`` is delta(e) for edge j oriented u -> v, i.e. the sum of
    the degree vectors of the leaves on the v side.  Leaf i carries delta_i."""

    tree: CombinatorialTree
    degree: ToricDegree
    decorations: np.ndarray

    def oriented(self, j, sign):
        return sign * self.decorations[j]

    def outgoing(self, v):
        """Outgoing decorations at ``v``: its leaves (by label), then its edges."""
        out = [self.degree.array[label] for label in self.tree.leaves_at[v]]
        for j, w in self.tree.adjacency[v]:
            out.append(self.decorations[j] if self.tree.edges[j][0] == v else -self.decorations[j])
        return out

    def vertex_degree(self, v):
        return ToricDegree(tuple(tuple(int(x) for x in d) for d in self.outgoing(v)))

    def path_sum(self, a, b, weights):
        """``sum_{e in [a, b]} weights[e] * delta(e)`` with the path orientation."""
        total = np.zeros(self.degree.n, dtype=object)
        for j, sign in self.tree.path_edges(a, b):
            total = total + weights[j] * sign * self.decorations[j].astype(object)
        return total

    def verify(self):
        """Leaf decorations, antisymmetry (implicit) and vertex balancing."""
        for v in range(self.tree.n_vertices):
            if np.any(np.sum(self.outgoing(v), axis=0) != 0):
                return False
        return True


def decorate(tree, degree):
    if len(tree.leaves) != len(degree):
        raise LeafCountMismatch(f"tree has {len(tree.leaves)} leaves, degree has {len(degree)} vectors")
    arr = degree.array
    dec = np.zeros((len(tree.edges), degree.n), dtype=np.int64)
    for j, s in enumerate(tree.splits):
        if s:
            dec[j] = arr[sorted(s)].sum(axis=0)
    dt = DecoratedTree(tree, degree, dec)
    if not dt.verify():  # pragma: no cover - balancing holds by construction
        raise TropSpineError("decoration failed to balance")
    return dt


def propagate_from_edge(tree, degree, edge, value):
    """Recompute all decorations from one edge's value and the leaf data by
    vertex balancing alone (used to check uniqueness)."""
    arr = degree.array
    dec = {edge: np.asarray(value, dtype=np.int64)}
    changed = True
    while changed:
        changed = False
        for v in range(tree.n_vertices):
            unknown = [j for j, _ in tree.adjacency[v] if j not in dec]
            if len(unknown) != 1:
                continue
            total = sum((arr[label] for label in tree.leaves_at[v]), np.zeros(degree.n, dtype=np.int64))
            for j, _ in tree.adjacency[v]:
                if j in dec:
                    total = total + (dec[j] if tree.edges[j][0] == v else -dec[j])
            j = unknown[0]
            dec[j] = -total if tree.edges[j][0] == v else total
            changed = True
    return np.array([dec[j] for j in range(len(tree.edges))], dtype=np.int64).reshape(-1, degree.n)

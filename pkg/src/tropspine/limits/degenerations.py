"""Allowable vertex sets and degenerations of a toric degree.

A vertex set S of a decorated tree is allowable when some weights
``a(e) >= 0`` on the non-leaf edges, normalised to ``sum a = 1``, satisfy
``sum_{e in [v, w]} a(e) delta(e) = 0`` for all v, w in S.  Path sums are
additive, so it is enough to impose this along consecutive members of S.
The collections ``(Delta_v)_{v in S}`` arising this way are the
degenerations of the leaf degree.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..degrees import ToricDegree
from ..errors import EmptySubset, TooLarge
from ..tropical import CombinatorialTree
from .decorated import DecoratedTree, decorate
from .lp import solve_feasibility

MAX_LEAVES = 10


@dataclass(frozen=True)
class Allowability:
    allowable: bool
    weights: dict = None  # edge index -> Fraction
    farkas: tuple = None
    trivial: bool = False
    method: str = ""


def allowability_system(dt, S, edges):
    """Rows of ``A a = b`` over the variables ``a(e), e in edges``: one block of n
    rows per consecutive pair of S, then the normalisation row."""
    col = {e: c for c, e in enumerate(edges)}
    A, b = [], []
    S = list(S)
    for v, w in zip(S, S[1:]):
        block = [[0] * len(edges) for _ in range(dt.degree.n)]
        for j, sign in dt.tree.path_edges(v, w):
            if j not in col:
                continue
            for r in range(dt.degree.n):
                block[r][col[j]] += sign * int(dt.decorations[j][r])
        A.extend(block)
        b.extend([0] * dt.degree.n)
    A.append([1] * len(edges))
    b.append(1)
    return A, b


def pair_equations_hold(dt, S, weights):
    """Exact check of the pairwise path equations for all pairs in S."""
    w = {j: Fraction(weights.get(j, 0)) for j in range(len(dt.tree.edges))}
    for v, u in combinations(list(S), 2):
        if any(x != 0 for x in dt.path_sum(v, u, w)):
            return False
    return True


def allowability(dt, S, edges=None, method=None):
    """Decide allowability of S using weights on ``edges`` (default: all non-leaf edges)."""
    S = list(dict.fromkeys(S))
    if not S:
        raise EmptySubset("the vertex set must be nonempty")
    if edges is None:
        edges = list(range(len(dt.tree.edges)))
    edges = list(edges)
    if not edges:
        # Nothing to weight.  One vertex and no edges: the trivial degeneration.
        if len(S) == 1:
            return Allowability(True, weights={}, trivial=True, method="trivial")
        return Allowability(False, method="no-edges")
    A, b = allowability_system(dt, S, edges)
    res = solve_feasibility(A, b, method)
    if not res.feasible:
        return Allowability(False, farkas=res.farkas, method=res.method)
    weights = {e: res.x[c] for c, e in enumerate(edges)}
    assert pair_equations_hold(dt, S, weights)
    return Allowability(True, weights=weights, method=res.method)


def is_allowable(dt, S):
    return allowability(dt, S)


# ------------------------------------------------------------ tree enumeration


def _insertions(nv, edges, leaves, label):
    """All trees obtained by attaching leaf ``label``: at a vertex, on a bounded
    edge, or on the leaf edge of an existing leaf."""
    for v in range(nv):
        yield nv, edges, leaves + (v,)
    for j, (u, v) in enumerate(edges):
        x = nv
        new_edges = edges[:j] + ((u, x), (x, v)) + edges[j + 1:]
        yield nv + 1, new_edges, leaves + (x,)
    for lab, v in enumerate(leaves):
        x = nv
        new_leaves = leaves[:lab] + (x,) + leaves[lab + 1:] + (x,)
        yield nv + 1, edges + ((v, x),), new_leaves


def enumerate_trees(n_leaves, max_internal_edges=None):
    """Yield every tree with ``n_leaves`` labelled leaves and no vertex of valence
    below 3 (each exactly once), with at most ``max_internal_edges`` bounded edges."""
    if n_leaves < 2:
        return
    if n_leaves == 2:
        yield CombinatorialTree(1, (), (0, 0))
        return
    bound = n_leaves - 3 if max_internal_edges is None else max_internal_edges

    def rec(nv, edges, leaves):
        if len(leaves) == n_leaves:
            yield CombinatorialTree(nv, edges, leaves)
            return
        for t in _insertions(nv, edges, leaves, len(leaves)):
            if len(t[1]) <= bound:
                yield from rec(*t)

    yield from rec(1, (), (0, 0, 0))


def subdivide(tree, edge=None, leaf=None):
    """Insert a two-valent vertex on a bounded edge or on a leaf edge; returns
    ``(tree, new_vertex)``.  A bounded edge (u, v) becomes (u, x), (x, v) with
    (u, x) keeping its index and (x, v) appended."""
    x = tree.n_vertices
    edges = list(tree.edges)
    leaves = list(tree.leaves)
    if edge is not None:
        u, v = edges[edge]
        edges[edge] = (u, x)
        edges.append((x, v))
    else:
        edges.append((leaves[leaf], x))
        leaves[leaf] = x
    return CombinatorialTree(x + 1, tuple(edges), tuple(leaves)), x


# ------------------------------------------------------------ degenerations


def _key(vectors):
    return tuple(sorted(tuple(int(c) for c in v) for v in vectors))


@dataclass
class DegenerationWitness:
    tree: DecoratedTree
    vertices: tuple
    weights: dict
    trivial: bool = False

    @property
    def degrees(self):
        return [self.tree.vertex_degree(v) for v in self.vertices]


@dataclass
class DegenerationResult:
    found: bool
    witness: DegenerationWitness = None
    method: str = ""
    examined: int = 0
    notes: list = field(default_factory=list)


def _partitions(vectors, targets):
    """Partitions of leaf indices into blocks, one per target entry, with block sum
    equal to that entry.  Equal targets take blocks in increasing order of their
    smallest leaf, so each partition appears once."""
    k = len(vectors)
    order = sorted(range(len(targets)), key=lambda i: targets[i])
    counter = [0]

    def rec(pos, remaining, last_min):
        counter[0] += 1
        if pos == len(order):
            if not remaining:
                yield []
            return
        need = len(order) - pos
        if len(remaining) < need:
            return
        t = targets[order[pos]]
        same_as_prev = pos > 0 and targets[order[pos - 1]] == t
        rem = sorted(remaining)
        max_size = len(rem) - (need - 1)
        for size in range(1, max_size + 1):
            for block in combinations(rem, size):
                if same_as_prev and block[0] < last_min:
                    continue
                if tuple(int(c) for c in np.sum([vectors[i] for i in block], axis=0)) != t:
                    continue
                for tail in rec(pos + 1, remaining - set(block), block[0]):
                    yield [(order[pos], block)] + tail

    return rec, counter


def _tree_from_partition(k, blocks):
    """Centre vertex 0; singleton blocks are leaves at 0, larger blocks hang off a
    new vertex joined to 0."""
    leaves = [0] * k
    edges = []
    nv = 1
    for block in blocks:
        if len(block) == 1:
            continue
        for i in block:
            leaves[i] = nv
        edges.append((0, nv))
        nv += 1
    return CombinatorialTree(nv, tuple(edges), tuple(leaves))


def _single_target(degree, target):
    vectors = [tuple(v) for v in degree.vectors]
    tkey = [tuple(int(c) for c in v) for v in target.vectors]
    if _key(tkey) == _key(vectors):
        tree = CombinatorialTree(1, (), tuple([0] * len(vectors)))
        dt = decorate(tree, degree)
        res = DegenerationResult(True, DegenerationWitness(dt, (0,), {}, trivial=True), "partition")
        res.notes.append("trivial degeneration: the degree itself, no weighted edges")
        return res
    if len(tkey) < 2:
        return DegenerationResult(False, method="partition", notes=["a vertex needs at least two ends"])
    rec, counter = _partitions(vectors, tkey)
    for part in rec(0, set(range(len(vectors))), -1):
        blocks = [b for _, b in part]
        tree = _tree_from_partition(len(vectors), blocks)
        dt = decorate(tree, degree)
        if not tree.edges:
            continue
        al = allowability(dt, [0])
        return DegenerationResult(True, DegenerationWitness(dt, (0,), al.weights), "partition", counter[0])
    res = DegenerationResult(False, method="partition", examined=counter[0])
    res.notes.append(
        "exhaustive: every tree realises Delta_v at a vertex v as a partition of the leaves "
        "into the branches at v, and no partition has the target block sums"
    )
    return res


def _match_vertices(vertex_keys, target_keys):
    """All vertex tuples whose degrees match the target multiset (as ordered lists
    aligned with the target)."""
    need = Counter(target_keys)
    cands = {key: [v for v, vk in enumerate(vertex_keys) if vk == key] for key in need}
    if any(len(cands[key]) < c for key, c in need.items()):
        return
    keys = list(need)

    def rec(i, chosen):
        if i == len(keys):
            yield tuple(chosen)
            return
        for combo in combinations(cands[keys[i]], need[keys[i]]):
            yield from rec(i + 1, chosen + list(combo))

    yield from rec(0, [])


def is_degeneration(degree, target, search_bound=None):
    """Search for a decorated tree and an allowable vertex set realising ``target``.

    ``target`` is a list of :class:`ToricDegree` (or vector lists).  A single
    entry is handled by leaf-partition search; longer targets enumerate trees
    with up to ``search_bound`` bounded edges, optionally subdividing edges with
    two-valent vertices when the target contains two-ended degrees.
    """
    if len(degree) > MAX_LEAVES:
        raise TooLarge(f"{len(degree)} leaves exceeds the enumeration guard of {MAX_LEAVES}")
    target = [t if isinstance(t, ToricDegree) else ToricDegree(tuple(map(tuple, t))) for t in target]
    if not target:
        raise EmptySubset("target must contain at least one degree")
    if len(target) == 1:
        return _single_target(degree, target[0])

    tkeys = [_key(t.vectors) for t in target]
    two_ended = sum(1 for t in target if len(t) == 2)
    examined = 0
    seen = set()
    for base in enumerate_trees(len(degree), search_bound):
        ck = base.canonical_key()
        if ck in seen:
            continue
        seen.add(ck)
        n_slots = len(base.edges) + len(base.leaves)
        for r in range(two_ended + 1):
            for slots in combinations(range(n_slots), r):
                tree = base
                for s in slots:
                    if s < len(base.edges):
                        tree, _ = subdivide(tree, edge=s)
                    else:
                        tree, _ = subdivide(tree, leaf=s - len(base.edges))
                examined += 1
                dt = decorate(tree, degree)
                vkeys = [_key(dt.outgoing(v)) for v in range(tree.n_vertices)]
                for S in _match_vertices(vkeys, tkeys):
                    al = allowability(dt, S)
                    if al.allowable:
                        return DegenerationResult(
                            True, DegenerationWitness(dt, S, al.weights, al.trivial), "enumeration", examined
                        )
    res = DegenerationResult(False, method="enumeration", examined=examined)
    bound = "all" if search_bound is None else f"at most {search_bound}"
    res.notes.append(f"exhaustive over trees with {bound} bounded edges and up to {two_ended} subdivisions")
    return res

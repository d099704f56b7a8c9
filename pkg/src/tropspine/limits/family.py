"""Degenerations of a typed curve (Delta, G), the restriction map L, and tropical
limits of one-parameter families of complex rational curves.

A :class:`DegenerationDatum` lives on a tree ``G'``: the combinatorial type
``G`` with some infinity-marked edges subdivided by two-valent vertices.
Cutting every infinity-marked bounded edge splits ``G'`` into pieces; each
piece inherits the original leaves it contains plus one end per cut
half-edge, decorated by the outgoing edge decoration.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..complex_curves import ComplexLine, ComplexRationalCurve, sample_amoeba
from ..degrees import ToricDegree, line_degree
from ..errors import InconsistentDatum, InsufficientSamples, TropSpineError, TypeUnstable
from ..geometry import Window
from ..spine import build_spine
from ..tropical import CombinatorialTree, ModuliPoint, from_moduli
from .decorated import decorate
from .degenerations import allowability, pair_equations_hold, subdivide
from .hausdorff import hausdorff


@dataclass(frozen=True, eq=False)
class Piece:
    degree: ToricDegree
    tree: CombinatorialTree
    vertices: tuple  # local vertex -> vertex of G'
    edges: tuple  # local edge -> edge of G'
    ends: tuple  # ("leaf", label) or ("cut", edge, +1/-1)


@dataclass(frozen=True, eq=False)
class DegenerationDatum:
    degree: ToricDegree
    tree: CombinatorialTree
    infinity_edges: tuple
    inserted: tuple
    pieces: tuple
    marked: tuple
    kept: tuple
    certificate: dict

    @property
    def trivial(self):
        return not self.infinity_edges

    @property
    def decorated(self):
        return decorate(self.tree, self.degree)

    def kept_vertices(self):
        return [self.marked[i] for i in self.kept]

    def validate(self):
        inf = set(self.infinity_edges)
        if any(e not in inf for e in self.certificate):
            raise InconsistentDatum("certificate weights an edge that is not infinity-marked")
        if any(Fraction(a) < 0 for a in self.certificate.values()):
            raise InconsistentDatum("certificate weights must be non-negative")
        if self.infinity_edges and not any(Fraction(a) != 0 for a in self.certificate.values()):
            raise InconsistentDatum("certificate must not vanish identically")
        if not self.infinity_edges and len(self.kept) > 1:
            raise InconsistentDatum("several kept pieces need infinity-marked edges")
        if not pair_equations_hold(self.decorated, self.kept_vertices(), self.certificate):
            raise InconsistentDatum("certificate violates a path equation")
        return True


def cut_pieces(degree, tree, infinity_edges):
    """Components of ``tree`` minus the infinity-marked bounded edges."""
    dt = decorate(tree, degree)
    inf = set(infinity_edges)
    comp = [-1] * tree.n_vertices
    count = 0
    for start in range(tree.n_vertices):
        if comp[start] >= 0:
            continue
        stack = [start]
        comp[start] = count
        while stack:
            x = stack.pop()
            for j, y in tree.adjacency[x]:
                if j not in inf and comp[y] < 0:
                    comp[y] = count
                    stack.append(y)
        count += 1
    pieces = []
    for c in range(count):
        verts = tuple(v for v in range(tree.n_vertices) if comp[v] == c)
        local = {v: i for i, v in enumerate(verts)}
        edges = tuple(j for j, (u, v) in enumerate(tree.edges) if j not in inf and comp[u] == c)
        ends, vecs, leaves = [], [], []
        for label, v in enumerate(tree.leaves):
            if comp[v] == c:
                ends.append(("leaf", label))
                vecs.append(degree[label])
                leaves.append(local[v])
        for j in sorted(inf):
            u, v = tree.edges[j]
            if comp[u] == c:
                ends.append(("cut", j, 1))
                vecs.append(tuple(int(x) for x in dt.decorations[j]))
                leaves.append(local[u])
            elif comp[v] == c:
                ends.append(("cut", j, -1))
                vecs.append(tuple(-int(x) for x in dt.decorations[j]))
                leaves.append(local[v])
        ptree = CombinatorialTree(
            len(verts), tuple((local[tree.edges[j][0]], local[tree.edges[j][1]]) for j in edges), tuple(leaves)
        )
        pieces.append(Piece(ToricDegree(tuple(vecs)), ptree, verts, edges, tuple(ends)))
    return pieces


def make_datum(degree, tree, infinity_edges, inserted=(), marked=None, kept=None, certificate=None):
    """Assemble and validate a datum; without a certificate, one is found by exact LP."""
    infinity_edges = tuple(sorted(set(infinity_edges)))
    pieces = cut_pieces(degree, tree, infinity_edges)
    if marked is None:
        marked = tuple(p.vertices[0] for p in pieces)
    marked = tuple(marked)
    for p, v in zip(pieces, marked):
        if v not in p.vertices:
            raise InconsistentDatum(f"marked vertex {v} is not in its piece")
    kept = tuple(range(len(pieces))) if kept is None else tuple(kept)
    if certificate is None:
        if not kept:
            certificate = {}
        else:
            al = allowability(decorate(tree, degree), [marked[i] for i in kept], edges=infinity_edges)
            if not al.allowable:
                raise InconsistentDatum(f"kept pieces are not allowable (Farkas certificate {al.farkas})")
            certificate = dict(al.weights)
    dd = DegenerationDatum(degree, tree, infinity_edges, tuple(inserted), tuple(pieces), marked, kept, certificate)
    if kept:
        dd.validate()
    return dd


def _require_match(dd, m):
    if m.degree != dd.degree or m.tree.edges != dd.tree.edges or m.tree.leaves != dd.tree.leaves:
        raise InconsistentDatum("moduli point is not of the datum's type")


def restrict_moduli(dd, m):
    """The map L: positions of marked vertices and surviving edge lengths per kept piece."""
    _require_match(dd, m)
    pos = from_moduli(m).positions
    out = []
    for i in dd.kept:
        p = dd.pieces[i]
        base = p.vertices.index(dd.marked[i])
        mp = ModuliPoint(p.degree, p.tree, base, pos[dd.marked[i]], m.lengths[list(p.edges)])
        out.append(mp.canonical())
    return out


def kernel_deformation(dd, m, s):
    """Lengthen each infinity-marked edge by ``s * a(e)`` and translate so the
    first kept marked vertex stays put.  L is constant along this path."""
    _require_match(dd, m)
    lengths = m.lengths.copy()
    for e, a in dd.certificate.items():
        lengths[e] += s * float(a)
    anchor = dd.marked[dd.kept[0]] if dd.kept else m.base_vertex
    before = from_moduli(m).positions[anchor]
    moved = ModuliPoint(m.degree, m.tree, m.base_vertex, m.position, lengths)
    after = from_moduli(moved).positions[anchor]
    return ModuliPoint(m.degree, m.tree, m.base_vertex, m.position + (before - after), lengths)


# ------------------------------------------------------------ families


@dataclass(frozen=True)
class Monomial:
    """``c * exp(a log t + b (log t)^2)``; ``b = 0`` gives ``c t^a``."""

    c: complex
    a: float = 0.0
    b: float = 0.0

    def __call__(self, t):
        lt = math.log(t)
        return complex(self.c) * math.exp(self.a * lt + self.b * lt * lt)


@dataclass(frozen=True, eq=False)
class Family:
    degree: ToricDegree
    punctures: tuple
    coefficients: tuple

    def __post_init__(self):
        if len(self.punctures) != self.degree.k or len(self.coefficients) != self.degree.n:
            raise TropSpineError("family has the wrong number of punctures or coefficients")

    def at(self, t):
        alpha = [m(t) for m in self.punctures]
        kappa = [m(t) for m in self.coefficients]
        if self.degree == line_degree(self.degree.n):
            return ComplexLine(alpha, kappa)
        return ComplexRationalCurve(self.degree, alpha, kappa)


@dataclass(frozen=True)
class Thresholds:
    growth: float = 1.5
    divergence_floor: float = 10.0
    convergence: float = 0.05

    def classify(self, values):
        """'divergent', 'convergent' or None for a sequence of non-negative reals."""
        v = [float(x) for x in values]
        if len(v) >= 2 and v[-1] > self.divergence_floor:
            if all(b > 0 and a > 0 and b / a >= self.growth for a, b in zip(v, v[1:])):
                return "divergent"
        if len(v) >= 2 and abs(v[-1] - v[-2]) < self.convergence:
            return "convergent"
        return None


def _norm_split(split, n_leaves):
    return split if 0 not in split else frozenset(range(n_leaves)) - split


def _vertex_signatures(tree):
    nl = len(tree.leaves)
    sig = []
    for v in range(tree.n_vertices):
        inc = frozenset(_norm_split(tree.splits[j], nl) for j, _ in tree.adjacency[v])
        sig.append((frozenset(tree.leaves_at[v]), inc))
    return sig


def _align(ref, other):
    """Maps ref edge -> other edge and ref vertex -> other vertex."""
    nl = len(ref.leaves)
    emap = {_norm_split(s, nl): j for j, s in enumerate(other.splits)}
    edges = [emap[_norm_split(s, nl)] for s in ref.splits]
    vmap = {s: v for v, s in enumerate(_vertex_signatures(other))}
    verts = [vmap[s] for s in _vertex_signatures(ref)]
    return edges, verts


def _closest_on_segment(a, b, c):
    """Euclidean closest point to c on [a, b] and its parameter."""
    d = b - a
    dd = float(d @ d)
    tau = 0.0 if dd == 0 else min(max(float((c - a) @ d) / dd, 0.0), 1.0)
    return a + tau * d, tau


@dataclass
class LimitPiece:
    index: int
    degree: ToricDegree
    moduli: ModuliPoint
    curve: object
    marked_vertex: int


@dataclass
class LimitResult:
    pieces: list
    datum: DegenerationDatum
    moduli: ModuliPoint  # last rescaled sample on G'
    ratios: dict  # infinity edge of G' -> l(e) / r at the last sample
    hausdorff: float
    hausdorff_error: float
    report: dict = field(default_factory=dict)

    @property
    def degrees(self):
        return [p.degree for p in self.pieces]


def limit_of_family(family, t_sequence, window, thresholds=None, use_stable_tail=True):
    """Tropical limit of ``Log_t`` of a family from finitely many parameters.

    Each sample's spine is rescaled by ``1 / log t``; edges and vertices are
    classified by :class:`Thresholds`; divergent edges are infinity-marked, a
    divergent edge between divergent vertices gets a two-valent vertex at the
    point closest (Euclidean) to the window centre when that point converges;
    pieces whose marked vertex converges are kept.  Limits are estimated by the
    last sample.
    """
    thresholds = thresholds or Thresholds()
    ts = [float(t) for t in t_sequence]
    if len(ts) < 3:
        raise InsufficientSamples("at least three parameters are needed")
    if any(t <= 1 for t in ts) or any(b <= a for a, b in zip(ts, ts[1:])):
        raise InsufficientSamples("parameters must be increasing and greater than 1")
    if not isinstance(window, Window):
        window = Window(window["min"], window["max"])

    curves = []
    for t in ts:
        sp = build_spine(family.at(t))
        curves.append(sp.curve.rescaled(1.0 / math.log(t)))

    keys = [c.tree.canonical_key() for c in curves]
    tail = 1
    while tail < len(curves) and keys[-tail - 1] == keys[-1]:
        tail += 1
    if tail < 2:
        raise TypeUnstable("the combinatorial type of the spines does not stabilise over the tail")
    tail_curves = curves[-tail:] if use_stable_tail else curves
    ref = curves[-1]
    tree = ref.tree
    lengths, positions = [], []
    for c in tail_curves:
        emap, vmap = _align(tree, c.tree)
        lengths.append(c.lengths[emap])
        positions.append(c.positions[vmap])
    lengths = np.array(lengths).reshape(len(tail_curves), len(tree.edges))
    positions = np.array(positions)

    edge_status = [thresholds.classify(lengths[:, j]) for j in range(len(tree.edges))]
    vert_status = []
    for v in range(tree.n_vertices):
        norms = np.abs(positions[:, v]).max(axis=1)
        st = thresholds.classify(norms)
        if st != "divergent":
            diffs = np.abs(positions[-1, v] - positions[-2, v]).max()
            st = "convergent" if diffs < thresholds.convergence else None
        vert_status.append(st)
    if any(s is None for s in edge_status):
        raise TypeUnstable(
            f"edge lengths neither converge nor diverge: {[j for j, s in enumerate(edge_status) if s is None]}"
        )
    if any(s is None for s in vert_status):
        raise TypeUnstable(
            f"vertex positions neither converge nor diverge: {[v for v, s in enumerate(vert_status) if s is None]}"
        )

    center = window.center
    inserted = []  # (edge, tau, limit point)
    for j, (u, v) in enumerate(tree.edges):
        if edge_status[j] != "divergent" or vert_status[u] != "divergent" or vert_status[v] != "divergent":
            continue
        pts = [_closest_on_segment(positions[m, u], positions[m, v], center) for m in range(len(tail_curves))]
        norms = [float(np.abs(p).max()) for p, _ in pts]
        if thresholds.classify(norms) == "divergent":
            continue
        if np.abs(pts[-1][0] - pts[-2][0]).max() >= thresholds.convergence:
            raise TypeUnstable(f"bounded points on edge {j} do not converge")
        inserted.append((j, pts[-1][1], pts[-1][0]))

    # G' and the last rescaled sample as a moduli point on it.
    gtree = tree
    glengths = list(ref.lengths)
    infinity = [j for j, s in enumerate(edge_status) if s == "divergent"]
    new_vertices = []
    for j, tau, _ in inserted:
        l = glengths[j]
        gtree, x = subdivide(gtree, edge=j)
        glengths[j] = tau * l
        glengths.append((1 - tau) * l)
        infinity.append(len(glengths) - 1)
        new_vertices.append(x)
    gm = ModuliPoint(ref.degree, gtree, ref.base_vertex, ref.base_position, np.array(glengths))

    pieces = cut_pieces(ref.degree, gtree, infinity)
    marked = tuple(p.vertices[0] for p in pieces)
    conv = set(v for v, s in enumerate(vert_status) if s == "convergent") | set(new_vertices)
    kept = tuple(i for i, v in enumerate(marked) if v in conv)
    dd = make_datum(ref.degree, gtree, infinity, tuple(new_vertices), marked, kept)

    restricted = restrict_moduli(dd, gm)
    out = []
    for i, mp in zip(kept, restricted):
        out.append(LimitPiece(i, mp.degree, mp, from_moduli(mp), marked[i]))
    r = max(glengths) if glengths else 0.0
    ratios = {e: glengths[e] / r for e in infinity} if r > 0 else {}
    if out:
        hd = hausdorff(ref, [p.curve for p in out], window)
    else:
        hd = hausdorff(ref, np.empty((0, ref.n)), window)
    report = {
        "t": ts,
        "stable_tail": tail,
        "thresholds": {
            "growth": thresholds.growth,
            "divergence_floor": thresholds.divergence_floor,
            "convergence": thresholds.convergence,
        },
        "edges": [
            {"edge": j, "split": sorted(_norm_split(tree.splits[j], len(tree.leaves))),
             "rescaled_lengths": lengths[:, j].tolist(), "status": edge_status[j]}
            for j in range(len(tree.edges))
        ],
        "vertices": [
            {"vertex": v, "rescaled_positions": positions[:, v].tolist(), "status": vert_status[v]}
            for v in range(tree.n_vertices)
        ],
        "inserted": [
            {"edge": j, "parameter": tau, "limit_position": p.tolist(), "vertex": x}
            for (j, tau, p), x in zip(inserted, new_vertices)
        ],
        "trivial": dd.trivial,
    }
    return LimitResult(out, dd, gm, ratios, hd.distance, hd.error_bound, report)


def rescaled_cloud_distance(curve, spine_curve, t, window, scheme=None):
    """Hausdorff distance in the window between ``Log_t`` of the amoeba cloud and
    the spine rescaled by ``1 / log t``.  The scheme's radii must reach far
    enough that the rescaled cloud covers the window, or the spine-to-cloud
    direction measures missing samples rather than the amoeba."""
    cloud = sample_amoeba(curve, scheme)
    s = 1.0 / math.log(t)
    return hausdorff(cloud.points * s, spine_curve.rescaled(s), window).distance

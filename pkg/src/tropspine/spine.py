"""Spines of amoebas: the constants, the inductive construction for lines,
the approximation map phi, the general-degree spine and its certification.

For a calibrated line with ``kappa = 1`` the construction runs over levels
``m = 2..n``: project away coordinate m, build the spine of the projection,
evaluate its phi at the closure point ``w`` to get ``p``, and modify along
``p`` with height ``p_i`` (``i`` the smallest local coordinate).  phi at level
m returns ``(p, min(log|q_m|, p_i))`` when the previous phi is within
``2 eps_{m-1} + log 2`` of ``p`` and ``(phi', max(phi'_i, p_i))`` otherwise.
Other lines are handled by rescaling coordinates to ``kappa = 1`` and
translating the result by ``log|kappa|``.
"""

import math
from dataclasses import dataclass, field
from functools import total_ordering

import numpy as np

from . import kernels
from .complex_curves import (
    ComplexLine,
    as_line,
    factor_through_line,
    log_abs,
    sample_amoeba,
)
from .degrees import psi_apply, psi_norm
from .errors import AtPuncture, DegenerateDegree, EmptyCloud, TropSpineError
from .geometry import Window, mesh_curve
from .tropical import (
    ON_IMAGE_TOL,
    TropicalCurve,
    distances_to_image,
    local_coordinates,
    modify_line,
    real_line,
)

LOG2 = math.log(2.0)
# floating-point allowance on top of every certified bound
DEFAULT_ATOL = 1e-9
BOUNDARY_TOL = 1e-12


@total_ordering
@dataclass(frozen=True)
class EpsilonConstant:
    """An exact value ``multiplier * log 2``."""

    multiplier: int

    @property
    def value(self):
        return self.multiplier * LOG2

    def __float__(self):
        return self.value

    def __mul__(self, other):
        return EpsilonConstant(self.multiplier * int(other))

    __rmul__ = __mul__

    def __add__(self, other):
        return EpsilonConstant(self.multiplier + other.multiplier)

    def __eq__(self, other):
        return isinstance(other, EpsilonConstant) and self.multiplier == other.multiplier

    def __lt__(self, other):
        return self.multiplier < other.multiplier

    def __hash__(self):
        return hash(self.multiplier)

    def __str__(self):
        return f"{self.multiplier}*log2"


def epsilon(n):
    """``eps_n = log 2 * (3^(n-1) - 1)``: eps_1 = 0 and eps_n = 3 eps_{n-1} + 2 log 2."""
    if n < 1:
        raise TropSpineError("epsilon is defined for n >= 1")
    return EpsilonConstant(3 ** (n - 1) - 1)


@dataclass(frozen=True, eq=False)
class SpineLevel:
    gamma: TropicalCurve
    p: np.ndarray
    coordinate: int
    threshold: float


@dataclass(frozen=True, eq=False)
class Spine:
    line: ComplexLine
    levels: tuple
    gamma: TropicalCurve
    translation: np.ndarray
    strict: bool = False
    boundary_hits: tuple = ()

    @property
    def n(self):
        return self.line.n

    @property
    def calibrated(self):
        return self.line.calibrated

    @property
    def epsilon(self):
        return epsilon(self.n)

    @property
    def vertex_ball_radius(self):
        return self.epsilon.value

    @property
    def curve(self):
        return self.gamma

    def cloud_bound(self):
        return self.epsilon.value

    def curve_bound(self):
        return self.epsilon.value


def _phi_normalised(levels, alpha, z, strict=False, hits=None):
    """phi for the kappa = 1 line with punctures ``alpha``, using ``levels[:len(alpha)-1]``."""
    z = np.asarray(z, dtype=np.complex128)
    x = np.log(np.abs(z - alpha[0]))[..., None]
    for m in range(2, len(alpha) + 1):
        lvl = levels[m - 2]
        p, i, thr = lvl.p, lvl.coordinate, lvl.threshold
        dist = np.abs(x - p).max(axis=-1)
        case1 = dist < thr if strict else dist <= thr
        if hits is not None:
            hits.append(int(np.count_nonzero(np.abs(dist - thr) <= BOUNDARY_TOL)))
        qm = np.log(np.abs(z - alpha[m - 1]))
        c1 = np.concatenate([np.broadcast_to(p, x.shape), np.minimum(qm, p[i])[..., None]], axis=-1)
        c2 = np.concatenate([x, np.maximum(x[..., i], p[i])[..., None]], axis=-1)
        x = np.where(case1[..., None], c1, c2)
    return x


def spine_line(line, strict=False, tol=ON_IMAGE_TOL):
    """Build the spine of a complex line (see module docstring).

    ``strict=True`` resolves ties on the Case-1 threshold towards the
    "otherwise" branch; both choices satisfy the same bounds.  ``tol`` is the
    on-image tolerance used when locating ``p`` on the previous spine.
    """
    line = as_line(line)
    alpha = line.punctures
    kappa = line.coefficients
    n = line.n
    translation = np.log(np.abs(kappa))
    gamma = real_line(0.0)
    levels = []
    hits = []
    for m in range(2, n + 1):
        if np.any(alpha[m - 1] == alpha[: m - 1]):
            raise AtPuncture("punctures must be distinct")
        counts = []
        p = _phi_normalised(levels, alpha[: m - 1], alpha[m - 1], strict, counts)
        if m > 2 and counts[-1]:
            hits.append(m - 1)
        coords = local_coordinates(gamma, p, tol)
        i = coords[0] - 1
        gamma = modify_line(gamma, p, p[i], tol)
        eps_prev = epsilon(m - 1)
        threshold = (2 * eps_prev.multiplier + 1) * LOG2
        levels.append(SpineLevel(gamma, p.copy(), i, threshold))
    return Spine(line, tuple(levels), gamma.translated(translation), translation, strict, tuple(hits))


def phi_eval(spine, z, return_boundary_hits=False):
    """phi for the input line (translated back), for a scalar or array of parameters."""
    line = spine.line
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z[..., None] == line.punctures):
        raise AtPuncture("phi is undefined at punctures")
    hits = [] if return_boundary_hits else None
    x = _phi_normalised(spine.levels, line.punctures, z, spine.strict, hits) + spine.translation
    if return_boundary_hits:
        return x, sum(hits)
    return x


@dataclass(frozen=True, eq=False)
class GeneralSpine:
    curve_in: object
    spine: Spine
    h: TropicalCurve
    norm: int

    @property
    def k(self):
        return self.spine.n

    @property
    def eps_prime(self):
        return self.spine.epsilon * self.norm

    @property
    def eps(self):
        return self.eps_prime * self.k

    @property
    def curve(self):
        return self.h

    @property
    def vertex_ball_radius(self):
        return self.eps_prime.value

    def cloud_bound(self):
        return self.eps_prime.value

    def curve_bound(self):
        return self.eps.value


def push_forward(gamma, degree):
    """The tropical curve ``psi o gamma`` of the given degree (same metric tree)."""
    psi = degree.psi
    M = psi.matrix
    return TropicalCurve(
        degree,
        gamma.tree,
        gamma.lengths,
        gamma.edge_directions @ M.T,
        gamma.leaf_directions @ M.T,
        gamma.base_vertex,
        psi_apply(psi, gamma.base_position),
    )


def spine_general(curve, strict=False, tol=ON_IMAGE_TOL):
    if curve.degree.psi.rank < curve.n:
        raise DegenerateDegree("spine_general needs a non-degenerate degree")
    line = factor_through_line(curve)
    sp = spine_line(line, strict, tol)
    h = push_forward(sp.gamma, curve.degree)
    return GeneralSpine(curve, sp, h, psi_norm(curve.degree.psi))


def build_spine(curve, strict=False, tol=ON_IMAGE_TOL):
    """``spine_line`` for lines, ``spine_general`` otherwise."""
    if curve.is_line():
        return spine_line(curve, strict, tol)
    return spine_general(curve, strict, tol)


def general_phi(gs, z):
    """``h(phi(z))`` in R^n."""
    return psi_apply(gs.curve_in.degree.psi, phi_eval(gs.spine, z))


# ------------------------------------------------------------ certification


def outside_vertex_balls(points, vertices, radius):
    """Mask of points not in any open sup-norm ball of the given radius."""
    if len(points) == 0 or radius <= 0:
        return np.ones(len(points), dtype=bool)
    return kernels.nearest_distances(points, vertices) >= radius


def cloud_window(cloud):
    """The cloud's bounding box."""
    return Window(cloud.points.min(axis=0), cloud.points.max(axis=0))


def default_window(curve, cloud, margin=0.0):
    """The cloud's bounding box intersected with a cube around the vertex
    centroid inside which every end of the curve is still sampled.

    The box alone is set by the longest tentacle, so shorter leaf rays poke out
    past their own sampled tips inside it.  The cube's half-width is the
    smallest sup-distance from the centroid to a tip set (innermost circle of
    each finite puncture, outermost circles for infinity) minus ``margin``.
    Falls back to a degenerate window at the centroid when nothing fits."""
    box = cloud_window(cloud)
    c = np.clip(curve.positions.mean(axis=0), box.lo, box.hi)
    P = cloud.points.reshape(cloud.grid_shape + (-1,))
    finite = cloud.grid_shape[0] - (1 if cloud.scheme.n_infinity_radii else 0)
    tips = [P[i, 0] for i in range(finite)]
    tips.append(P[:, -1].reshape(-1, P.shape[-1]))
    reach = min(float(np.abs(t - c).max(axis=1).min()) for t in tips)
    half = max(reach - margin, 0.0)
    return Window(np.maximum(box.lo, c - half), np.minimum(box.hi, c + half))


@dataclass
class CertificationReport:
    bound_cloud_to_curve: float
    bound_curve_to_cloud: float
    max_cloud_to_curve: float
    max_curve_to_cloud: float
    mesh_points: int
    mesh_step: float
    slack: float
    window: Window
    vacuous: bool
    max_phi_residual: float = float("nan")
    phi_bound: float = float("nan")
    max_phi_offset: float = float("nan")
    pushforward_residual: float = float("nan")
    boundary_hits: int = 0
    atol: float = DEFAULT_ATOL
    notes: list = field(default_factory=list)

    @property
    def passed_cloud_to_curve(self):
        return self.max_cloud_to_curve <= self.bound_cloud_to_curve + self.atol

    @property
    def passed_curve_to_cloud(self):
        return self.vacuous or self.max_curve_to_cloud <= self.bound_curve_to_cloud + self.slack + self.atol

    @property
    def passed_phi(self):
        if math.isnan(self.max_phi_residual):
            return True
        ok = self.max_phi_residual <= self.phi_bound + self.atol and self.max_phi_offset <= 1e-10
        if not math.isnan(self.pushforward_residual):
            ok = ok and self.pushforward_residual <= self.bound_cloud_to_curve + self.atol
        return ok

    @property
    def passed(self):
        return self.passed_cloud_to_curve and self.passed_curve_to_cloud and self.passed_phi

    def to_dict(self):
        def num(x):
            return None if isinstance(x, float) and math.isnan(x) else x

        return {
            "passed": self.passed,
            "cloud_to_curve": {
                "max": self.max_cloud_to_curve,
                "bound": self.bound_cloud_to_curve,
                "passed": self.passed_cloud_to_curve,
            },
            "curve_to_cloud": {
                "max": num(self.max_curve_to_cloud),
                "bound": self.bound_curve_to_cloud,
                "slack": self.slack,
                "mesh_points": self.mesh_points,
                "mesh_step": self.mesh_step,
                "vacuous": self.vacuous,
                "passed": self.passed_curve_to_cloud,
            },
            "phi": {
                "max_residual": num(self.max_phi_residual),
                "bound": num(self.phi_bound),
                "max_offset_from_curve": num(self.max_phi_offset),
                "pushforward_residual": num(self.pushforward_residual),
                "passed": self.passed_phi,
            },
            "window": self.window.to_dict(),
            "boundary_hits": self.boundary_hits,
            "atol": self.atol,
            "notes": list(self.notes),
        }


def certify_curve(
    curve,
    cloud,
    cloud_bound,
    curve_bound=None,
    vertex_radius=None,
    mesh_step=0.05,
    window=None,
    slack=None,
    atol=DEFAULT_ATOL,
):
    """Checks (i) and (ii) for an arbitrary tropical curve against a cloud.

    (i)  max over the cloud of the distance to the curve, against ``cloud_bound``;
    (ii) max over mesh points of the curve, inside ``window`` and outside the open
         ``vertex_radius`` balls around vertices, of the distance to the cloud,
         against ``curve_bound + slack``.

    The window defaults to :func:`default_window`.  A mesh step wider than
    the window leaves (ii) vacuous, which the report flags.  ``atol`` absorbs
    floating-point rounding in every comparison.
    """
    if len(cloud) == 0:
        raise EmptyCloud("cannot certify against an empty cloud")
    if mesh_step <= 0:
        raise TropSpineError("mesh_step must be positive")
    curve_bound = cloud_bound if curve_bound is None else curve_bound
    vertex_radius = cloud_bound if vertex_radius is None else vertex_radius
    pts = cloud.points
    d_cloud = distances_to_image(curve, pts)
    if window is None:
        window = default_window(curve, cloud)
    if slack is None:
        slack = 2.0 * cloud.grid_spacing()
    notes = []
    if mesh_step > float((window.hi - window.lo).max()):
        mesh = np.empty((0, curve.n))
        notes.append("mesh step exceeds the window: curve-to-cloud check is vacuous")
    else:
        mesh = mesh_curve(curve, window, mesh_step)
        mesh = mesh[outside_vertex_balls(mesh, curve.positions, vertex_radius)]
        if len(mesh) == 0:
            notes.append("no mesh points inside the window outside vertex balls: curve-to-cloud check is vacuous")
    vacuous = len(mesh) == 0
    if vacuous:
        max_curve = float("nan")
    else:
        max_curve = float(kernels.nearest_distances(mesh, pts).max())
    return CertificationReport(
        bound_cloud_to_curve=float(cloud_bound),
        bound_curve_to_cloud=float(curve_bound),
        max_cloud_to_curve=float(d_cloud.max()),
        max_curve_to_cloud=max_curve,
        mesh_points=int(len(mesh)),
        mesh_step=float(mesh_step),
        slack=float(slack),
        window=window,
        vacuous=vacuous,
        atol=float(atol),
        notes=notes,
    )


def certify(sp, cloud=None, mesh_step=0.05, window=None, slack=None, atol=DEFAULT_ATOL):
    """Full certification of a :class:`Spine` or :class:`GeneralSpine`; adds the
    phi residual check (iii) to :func:`certify_curve`."""
    if isinstance(sp, Spine):
        curve_in = sp.line
    else:
        curve_in = sp.curve_in
    if cloud is None:
        cloud = sample_amoeba(curve_in)
    report = certify_curve(
        sp.curve,
        cloud,
        sp.cloud_bound(),
        sp.curve_bound(),
        sp.vertex_ball_radius,
        mesh_step,
        window,
        slack,
        atol,
    )
    line_spine = sp if isinstance(sp, Spine) else sp.spine
    phi, hits = phi_eval(line_spine, cloud.params, return_boundary_hits=True)
    line_logs = log_abs(line_spine.line, cloud.params)
    report.max_phi_residual = float(np.abs(line_logs - phi).max())
    report.phi_bound = line_spine.epsilon.value
    report.max_phi_offset = float(distances_to_image(line_spine.gamma, phi).max())
    report.boundary_hits = int(hits) + len(line_spine.boundary_hits)
    if line_spine.boundary_hits:
        report.notes.append(
            f"construction hit the Case-1 threshold exactly at levels {list(line_spine.boundary_hits)}"
        )
    if isinstance(sp, GeneralSpine):
        hphi = psi_apply(sp.curve_in.degree.psi, phi)
        report.pushforward_residual = float(np.abs(cloud.points - hphi).max())
    return report


def surjectivity_gap(spine, params, mesh_step=0.05, window=None):
    """Largest distance from a mesh point of Gamma (inside the window, outside the
    open eps_n balls around vertices) to the set phi(params).  Returns
    (gap, number_of_mesh_points, window)."""
    phi = phi_eval(spine, params)
    gamma = spine.gamma
    if window is None:
        window = Window(phi.min(axis=0), phi.max(axis=0))
    mesh = mesh_curve(gamma, window, mesh_step)
    mesh = mesh[outside_vertex_balls(mesh, gamma.positions, spine.epsilon.value)]
    if len(mesh) == 0:
        return 0.0, 0, window
    return float(kernels.nearest_distances(mesh, phi).max()), int(len(mesh)), window

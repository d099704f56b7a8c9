"""Parametrised rational curves in (C*)^n and their amoebas.

A curve of degree ``(delta_0, ..., delta_k)`` is given by finite punctures
``alpha_1..alpha_k`` (``alpha_0`` is infinity) and coefficients
``kappa_1..kappa_n``::

    z_j(f(z)) = kappa_j * prod_i (z - alpha_i) ** (-delta_i[j])

Everything is evaluated in log-polar form, since exponents of size ~10 near a
puncture overflow a direct product.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .degrees import ToricDegree, line_degree, psi_apply, torus_apply, torus_preimage
from .errors import (
    AtPuncture,
    BadScheme,
    DegenerateDegree,
    DegreeMismatch,
    DimensionMismatch,
    TropSpineError,
    ZeroCoefficient,
    ZeroCoordinate,
)

MIN_SEPARATION = 1e-9


def _check_punctures(alpha):
    for a in range(len(alpha)):
        for b in range(a + 1, len(alpha)):
            if abs(alpha[a] - alpha[b]) <= MIN_SEPARATION:
                raise TropSpineError(f"punctures {a + 1} and {b + 1} are closer than {MIN_SEPARATION}")


@dataclass(frozen=True, eq=False)
class ComplexRationalCurve:
    degree: ToricDegree
    punctures: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.punctures, dtype=np.complex128).reshape(-1)
        kappa = np.asarray(self.coefficients, dtype=np.complex128).reshape(-1)
        object.__setattr__(self, "punctures", alpha)
        object.__setattr__(self, "coefficients", kappa)
        if len(alpha) != self.degree.k:
            raise DimensionMismatch(f"{self.degree.k} finite punctures expected, got {len(alpha)}")
        if len(kappa) != self.degree.n:
            raise DimensionMismatch(f"{self.degree.n} coefficients expected, got {len(kappa)}")
        if np.any(kappa == 0):
            raise ZeroCoefficient("coefficients must be nonzero")
        _check_punctures(alpha)

    @property
    def n(self):
        return self.degree.n

    @property
    def k(self):
        return self.degree.k

    @cached_property
    def exponents(self):
        """(n, k) float matrix with entry ``-delta_i[j]``; equals the psi matrix."""
        return -self.degree.array[1:].T.astype(np.float64)

    def is_line(self):
        return self.degree == line_degree(self.n)


class ComplexLine(ComplexRationalCurve):
    """``z -> (kappa_1 (z - alpha_1), ..., kappa_n (z - alpha_n))``."""

    def __init__(self, punctures, coefficients=None):
        punctures = np.asarray(punctures, dtype=np.complex128).reshape(-1)
        if coefficients is None:
            coefficients = np.ones(len(punctures), dtype=np.complex128)
        super().__init__(line_degree(len(punctures)), punctures, coefficients)

    @property
    def calibrated(self):
        return bool(np.all(self.coefficients == self.coefficients[0]))


def as_line(curve):
    if isinstance(curve, ComplexLine):
        return curve
    if not curve.is_line():
        raise TropSpineError("curve is not a line")
    return ComplexLine(curve.punctures, curve.coefficients)


def _log_terms(curve, z):
    z = np.asarray(z, dtype=np.complex128)
    diff = z[..., None] - curve.punctures
    if np.any(diff == 0):
        raise AtPuncture("parameter coincides with a puncture")
    return np.log(diff)


def log_abs(curve, z):
    """``Log f(z)`` for an array of parameters; shape ``z.shape + (n,)``."""
    logs = _log_terms(curve, z).real
    return np.log(np.abs(curve.coefficients)) + logs @ curve.exponents.T


def evaluate(curve, z):
    """``f(z)`` as complex numbers, built from log-magnitude and argument."""
    logs = _log_terms(curve, z)
    total = np.log(curve.coefficients) + logs @ curve.exponents.T
    return np.exp(total)


def log_map(p, t=None):
    """Coordinatewise ``log|.|``, divided by ``log t`` when ``t`` is given."""
    p = np.asarray(p, dtype=np.complex128)
    if np.any(p == 0):
        raise ZeroCoordinate("Log is undefined at zero coordinates")
    out = np.log(np.abs(p))
    if t is not None:
        if t <= 1:
            raise TropSpineError("Log_t needs t > 1")
        out = out / np.log(t)
    return out


def toric_degree_of(curve, rel=1e-6):
    """Recover the degree from numerical slopes of ``log|z_j f|`` near each puncture
    (and at infinity) and check it against the stored one."""
    alpha = curve.punctures
    k, n = curve.k, curve.n
    gaps = _half_gaps(alpha)
    found = np.zeros((k + 1, n), dtype=np.int64)
    slopes = np.zeros((k + 1, n))
    for i in range(k):
        r1, r2 = rel * gaps[i], rel * gaps[i] / 10.0
        z1, z2 = alpha[i] + r1 * np.exp(0.3j), alpha[i] + r2 * np.exp(0.3j)
        s = (log_abs(curve, z2) - log_abs(curve, z1)) / (np.log(r2) - np.log(r1))
        slopes[i + 1] = -s
    R = max(1.0, np.abs(alpha).max(initial=0.0)) / rel
    z1, z2 = R * np.exp(0.3j), 10 * R * np.exp(0.3j)
    slopes[0] = (log_abs(curve, z2) - log_abs(curve, z1)) / np.log(10.0)
    found = np.rint(slopes).astype(np.int64)
    if not np.array_equal(found, curve.degree.array):
        raise DegreeMismatch(f"numerical degree {found.tolist()} differs from stored {curve.degree.array.tolist()}")
    return ToricDegree(tuple(map(tuple, found.tolist()))), slopes


def _half_gaps(alpha):
    k = len(alpha)
    if k == 1:
        return np.ones(1)
    d = np.abs(alpha[:, None] - alpha[None, :])
    d[np.arange(k), np.arange(k)] = np.inf
    return d.min(axis=1) / 2.0


@dataclass(frozen=True)
class SamplingScheme:
    """Per-puncture log-radial grid: ``n_radii`` circles with radii log-spaced in
    ``[r_min * g, r_max * g]`` (g = half the distance to the nearest other
    puncture) and ``n_angles`` equally spaced angles, offset by half a step."""

    n_radii: int = 64
    n_angles: int = 64
    r_min: float = 1e-6
    r_max: float = 1e6
    n_infinity_radii: int = 0

    def __post_init__(self):
        if self.r_min <= 0 or self.r_max <= self.r_min:
            raise BadScheme("need 0 < r_min < r_max")
        if self.n_radii < 1 or self.n_angles < 1 or self.n_infinity_radii < 0:
            raise BadScheme("sample counts must be positive")


@dataclass(frozen=True, eq=False)
class SampleCloud:
    params: np.ndarray
    points: np.ndarray
    grid_shape: tuple
    scheme: SamplingScheme

    def __len__(self):
        return len(self.params)

    def grid_spacing(self):
        """Median over samples of the largest sup-distance to a radial or angular
        grid neighbour."""
        P = self.points.reshape(self.grid_shape + (-1,))
        nb = np.zeros(self.grid_shape)
        if self.grid_shape[1] > 1:
            d = np.abs(np.diff(P, axis=1)).max(axis=-1)
            nb[:, 1:] = np.maximum(nb[:, 1:], d)
            nb[:, :-1] = np.maximum(nb[:, :-1], d)
        if self.grid_shape[2] > 1:
            d = np.abs(P - np.roll(P, 1, axis=2)).max(axis=-1)
            nb = np.maximum(nb, d)
            nb = np.maximum(nb, np.roll(d, -1, axis=2))
        return float(np.median(nb))


def sample_amoeba(curve, scheme=None):
    scheme = scheme or SamplingScheme()
    alpha = curve.punctures
    gaps = _half_gaps(alpha)
    theta = 2 * np.pi * (np.arange(scheme.n_angles) + 0.5) / scheme.n_angles
    unit = np.exp(1j * theta)
    rows = []
    for i in range(curve.k):
        radii = np.exp(np.linspace(np.log(scheme.r_min * gaps[i]), np.log(scheme.r_max * gaps[i]), scheme.n_radii))
        rows.append(alpha[i] + radii[:, None] * unit[None, :])
    if scheme.n_infinity_radii:
        R0 = max(1.0, 2 * np.abs(alpha).max(initial=0.0))
        radii = R0 * np.exp(np.linspace(0.0, np.log(scheme.r_max), scheme.n_infinity_radii))
        extra = radii[:, None] * unit[None, :]
        if scheme.n_infinity_radii == scheme.n_radii:
            rows.append(extra)
        else:
            raise BadScheme("n_infinity_radii must be 0 or equal to n_radii")
    z = np.stack(rows)
    shape = z.shape
    z = z.reshape(-1)
    pts = log_abs(curve, z)
    return SampleCloud(z, pts, shape, scheme)


def project_line(line):
    """Drop the last coordinate; ``w`` is the closure point at puncture ``alpha_n``,
    ``w_i = kappa_i (alpha_n - alpha_i)``."""
    if line.n < 2:
        raise TropSpineError("projection needs n >= 2")
    alpha, kappa = line.punctures, line.coefficients
    w = kappa[:-1] * (alpha[-1] - alpha[:-1])
    return ComplexLine(alpha[:-1], kappa[:-1]), w


def factor_through_line(curve):
    """A line ``L`` in (C*)^k with ``Psi(L(z)) == f(z)``; ``L`` has the same punctures
    and coefficients ``torus_preimage(psi, kappa)``."""
    psi = curve.degree.psi
    if psi.rank < curve.n:
        raise DegenerateDegree("factorisation needs a non-degenerate degree")
    lam = torus_preimage(psi, curve.coefficients)
    return ComplexLine(curve.punctures, lam)


def composition_residual(curve, line, z):
    """Max relative error of ``Psi(L(z))`` against ``f(z)`` over parameters ``z``."""
    lz = evaluate(line, z)
    lhs = torus_apply(curve.degree.psi, lz)
    rhs = evaluate(curve, z)
    return float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))


def log_diagram_residual(curve, line, z):
    """Max of ``|Log f(z) - psi(Log L(z))|``."""
    return float(np.max(np.abs(log_abs(curve, z) - psi_apply(curve.degree.psi, log_abs(line, z)))))

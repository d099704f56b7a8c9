import numpy as np
import pytest

from generators import random_curve, random_degree, random_line
from tropspine import (
    ComplexLine,
    ComplexRationalCurve,
    SamplingScheme,
    ToricDegree,
    evaluate,
    factor_through_line,
    line_degree,
    log_abs,
    log_map,
    project_line,
    sample_amoeba,
    toric_degree_of,
)
from tropspine.complex_curves import composition_residual, log_diagram_residual
from tropspine.errors import AtPuncture, BadScheme, DegenerateDegree, ZeroCoordinate

FIG = ComplexLine([0, -1, 2j])


def test_evaluate_figure_line():
    assert np.allclose(evaluate(FIG, np.array([1.0])), [[1, 2, 1 - 2j]])


def test_unit_magnitudes_multiply():
    deg = ToricDegree(((1, 1), (-2, 0), (1, -1)))
    # |z - a_i| = 1 for both punctures.
    curve = ComplexRationalCurve(deg, [0.0, 1.0], [1, 1])
    z = np.array([0.5 + np.sqrt(3) / 2 * 1j, 0.5 - np.sqrt(3) / 2 * 1j])
    assert np.allclose(np.abs(evaluate(curve, z)), 1.0, atol=1e-14)


def test_slope_near_double_zero():
    curve = ComplexRationalCurve(ToricDegree(((2, 0), (-2, 0), (0, 1), (0, -1))), [0.0, 1.0, 3.0], [1, 1])
    r1, r2 = 1e-5, 1e-6
    l1 = log_abs(curve, np.array([r1]))[0, 0]
    l2 = log_abs(curve, np.array([r2]))[0, 0]
    assert (l1 - l2) / (np.log(r1) - np.log(r2)) == pytest.approx(2.0, abs=1e-3)


def test_at_puncture():
    with pytest.raises(AtPuncture):
        evaluate(FIG, np.array([-1.0 + 0j]))


def test_toric_degree_of():
    assert toric_degree_of(FIG)[0] == line_degree(3)
    rng = np.random.default_rng(22)
    for _ in range(100):
        deg = random_degree(rng, max_k=5)
        found, slopes = toric_degree_of(random_curve(rng, deg))
        assert found == deg
        assert np.abs(slopes - np.rint(slopes)).max() <= 1e-3


def test_sampling_real_torus():
    # n = 1, L = C*: log-spaced radii cover [-A, A] with gaps 2A / (#radii - 1).
    scheme = SamplingScheme(n_radii=64, n_angles=8, r_min=1e-6, r_max=1e6)
    cloud = sample_amoeba(ComplexLine([0]), scheme)
    x = np.unique(cloud.points[:, 0])
    A = np.log(1e6)
    assert x.min() == pytest.approx(-A) and x.max() == pytest.approx(A)
    assert np.diff(x).max() <= 2 * A / 63 + 1e-12


def test_sampling_amoeba_membership():
    cloud = sample_amoeba(ComplexLine([0, -1]))
    e1, e2 = np.exp(cloud.points[:, 0]), np.exp(cloud.points[:, 1])
    # The line 1 + z_1 - z_2 = 0: triangle inequality.
    assert np.all(np.abs(e2 - e1) <= 1 + 1e-9 * np.maximum(1, e2))
    assert np.all(1 <= (e1 + e2) * (1 + 1e-12))


def test_sampling_deterministic():
    a = sample_amoeba(FIG)
    b = sample_amoeba(FIG)
    assert np.array_equal(a.points, b.points) and np.array_equal(a.params, b.params)


def test_bad_scheme():
    with pytest.raises(BadScheme):
        sample_amoeba(FIG, SamplingScheme(r_min=0.0))


def test_log_map():
    assert np.array_equal(log_map(np.ones(3)), np.zeros(3))
    assert np.allclose(log_map(np.array([np.e, np.e ** 2])), [1, 2])
    assert np.allclose(log_map(np.array([np.exp(2), np.exp(4)]), t=np.e ** 2), [1, 2])
    with pytest.raises(ZeroCoordinate):
        log_map(np.array([1.0, 0.0]))


def test_project_line():
    proj, w = project_line(FIG)
    assert np.allclose(w, [2j, 2j + 1])
    assert np.allclose(np.abs(w), [2, np.sqrt(5)])
    assert np.allclose(project_line(ComplexLine([0, -1]))[1], [-1])
    assert proj.calibrated


def test_factor_through_line():
    L = factor_through_line(FIG)
    assert np.allclose(L.coefficients, FIG.coefficients)
    deg = ToricDegree(((1, 1), (-2, 0), (1, -1)))
    ones = factor_through_line(ComplexRationalCurve(deg, [0, 1], [1, 1]))
    assert np.allclose(ones.coefficients, 1.0)
    rng = np.random.default_rng(23)
    for _ in range(100):
        curve = random_curve(rng, random_degree(rng))
        line = factor_through_line(curve)
        z = curve.punctures[0] + np.exp(rng.uniform(-3, 3, 20) + 2j * np.pi * rng.uniform(size=20))
        assert composition_residual(curve, line, z) < 1e-9
        assert log_diagram_residual(curve, line, z) < 1e-9
    with pytest.raises(DegenerateDegree):
        factor_through_line(ComplexRationalCurve(ToricDegree(((1, 0), (-1, 0))), [0], [1, 1]))


def test_random_lines_are_calibrated():
    rng = np.random.default_rng(24)
    assert random_line(rng, 3).calibrated
    assert not random_line(rng, 3, calibrated=False).calibrated

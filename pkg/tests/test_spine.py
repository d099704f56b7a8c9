import math

import numpy as np
import pytest

from generators import random_curve, random_degree, random_line
from tropspine import (
    ComplexLine,
    ComplexRationalCurve,
    SamplingScheme,
    ToricDegree,
    Window,
    certify,
    certify_curve,
    epsilon,
    log_abs,
    phi_eval,
    psi_apply,
    sample_amoeba,
    spine_general,
    spine_line,
    surjectivity_gap,
)
from tropspine.errors import EmptyCloud, TropSpineError
from tropspine.spine import EpsilonConstant, general_phi, push_forward
from tropspine.tropical import check_balancing, distances_to_image, is_calibrated, same_curve

LOG2 = math.log(2)


def test_epsilon_values():
    assert epsilon(1).multiplier == 0 and epsilon(1).value == 0.0
    assert epsilon(2).multiplier == 2
    assert epsilon(4).multiplier == 26 == 3 * epsilon(3).multiplier + 2
    assert str(epsilon(3)) == "8*log2"
    assert epsilon(3) * 2 == EpsilonConstant(16)
    assert epsilon(3) + epsilon(2) == EpsilonConstant(10)
    assert epsilon(3) < epsilon(4)
    with pytest.raises(TropSpineError):
        epsilon(0)


def test_spine_of_real_torus():
    sp = spine_line(ComplexLine([0]))
    assert np.array_equal(sp.gamma.positions, [[0.0]])
    z = np.array([3 + 4j, 1e-3, -7.0])
    assert np.allclose(phi_eval(sp, z)[:, 0], np.log(np.abs(z)))


def test_spine_of_plane_line():
    sp = spine_line(ComplexLine([0, -1]))
    assert np.allclose(sp.gamma.positions, [[0.0, 0.0]])
    big = phi_eval(sp, np.array([1e6]))[0]
    assert big[0] == pytest.approx(big[1]) and big[0] == pytest.approx(math.log(1e6), abs=1e-6)
    assert np.abs(big - log_abs(sp.line, np.array([1e6]))[0]).max() < epsilon(2).value
    small = phi_eval(sp, np.array([1e-7]))[0]
    assert small[1] == 0.0 and small[0] < 0


def test_figure_line_both_branches():
    line = ComplexLine([0, -1, 2j])
    default = spine_line(line)
    strict = spine_line(line, strict=True)
    assert np.allclose(default.gamma.positions, [[0, 0, 0]])
    assert np.allclose(sorted(map(tuple, strict.gamma.positions)), [(0, 0, LOG2), (LOG2, LOG2, LOG2)])
    assert strict.boundary_hits == (2,)
    for sp in (default, strict):
        assert is_calibrated(sp.gamma) and check_balancing(sp.gamma)
        assert certify(sp).passed


def test_phi_residual_is_strict_on_random_lines():
    rng = np.random.default_rng(31)
    for i in range(40):
        line = random_line(rng, 2 + i % 4, calibrated=bool(i % 2))
        sp = spine_line(line)
        cloud = sample_amoeba(line, SamplingScheme(32, 32))
        phi = phi_eval(sp, cloud.params)
        assert np.abs(log_abs(line, cloud.params) - phi).max() < sp.epsilon.value
        # phi lands on Gamma.
        assert distances_to_image(sp.gamma, phi).max() <= 1e-9


def test_certify_plane_line():
    rep = certify(spine_line(ComplexLine([0, -1])))
    assert rep.passed and not rep.vacuous
    assert rep.max_phi_residual < 2 * LOG2
    assert rep.to_dict()["passed"] is True


def test_translated_curve_fails():
    sp = spine_line(ComplexLine([0, -1]))
    cloud = sample_amoeba(sp.line)
    rep = certify_curve(sp.curve.translated(np.array([10.0, 10.0])), cloud, sp.cloud_bound())
    assert not rep.passed_cloud_to_curve


def test_mesh_step_larger_than_window_is_vacuous():
    rep = certify(spine_line(ComplexLine([0, -1])), mesh_step=1e3)
    assert rep.vacuous and rep.passed_curve_to_cloud
    assert any("vacuous" in note for note in rep.notes)


def test_certify_errors():
    sp = spine_line(ComplexLine([0, -1]))
    cloud = sample_amoeba(sp.line)
    with pytest.raises(TropSpineError):
        certify(sp, cloud, mesh_step=0.0)
    empty = type(cloud)(cloud.params[:0], cloud.points[:0], (0, 0, 0), cloud.scheme)
    with pytest.raises(EmptyCloud):
        certify_curve(sp.curve, empty, 1.0)


def test_general_constants():
    deg = ToricDegree(((2, 2), (-2, 0), (0, -2), (0, 0)))
    gs = spine_general(ComplexRationalCurve(deg, [0, 1, 2], [1, 1]))
    assert gs.norm == 2 and gs.k == 3
    assert gs.eps_prime == EpsilonConstant(16) and gs.eps == EpsilonConstant(48)


def test_general_on_line_matches_line_spine():
    line = ComplexLine([0, -1, 2j])
    gs = spine_general(line)
    assert same_curve(gs.curve, spine_line(line).gamma)
    assert gs.eps_prime == epsilon(3)


def test_push_forward_consistency():
    rng = np.random.default_rng(32)
    for _ in range(30):
        curve = random_curve(rng, random_degree(rng, max_k=4))
        gs = spine_general(curve)
        assert check_balancing(gs.curve)
        assert np.array_equal(gs.curve.leaf_directions, curve.degree.array)
        h = push_forward(gs.spine.gamma, curve.degree)
        assert np.allclose(h.positions, np.array([psi_apply(curve.degree.psi, x) for x in gs.spine.gamma.positions]))
        z = curve.punctures[0] + np.exp(rng.uniform(-4, 4, 50) + 2j * np.pi * rng.uniform(size=50))
        resid = np.abs(log_abs(curve, z) - general_phi(gs, z)).max()
        assert resid <= gs.eps_prime.value + 1e-9


def test_general_certificates_random():
    rng = np.random.default_rng(33)
    for _ in range(30):
        gs = spine_general(random_curve(rng, random_degree(rng, max_k=4)))
        rep = certify(gs)
        assert rep.passed
        assert rep.pushforward_residual <= gs.eps_prime.value + rep.atol


def test_surjectivity_gap_figure_line():
    sp = spine_line(ComplexLine([0, -1, 2j]))
    cloud = sample_amoeba(sp.line, SamplingScheme(200, 64, 1e-8, 1e8))
    gap, count, window = surjectivity_gap(sp, cloud.params)
    assert count > 0 and gap <= 0.1
    assert isinstance(window, Window)

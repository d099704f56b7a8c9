import os
import subprocess
import sys

import numpy as np
import pytest

from tropspine import kernels


def brute_segment(points, starts, vecs, tmax, samples=20001):
    """Oracle: dense sampling of each segment (rays cut at t = 50)."""
    out = np.full(len(points), np.inf)
    for s, v, tm in zip(starts, vecs, tmax):
        t = np.linspace(0.0, tm if np.isfinite(tm) else 50.0, samples)
        seg = s[None, :] + t[:, None] * v[None, :]
        d = np.abs(points[:, None, :] - seg[None, :, :]).max(axis=2).min(axis=1)
        out = np.minimum(out, d)
    return out


def random_segments(rng, m, n):
    starts = rng.normal(size=(m, n))
    vecs = rng.integers(-3, 4, size=(m, n)).astype(float)
    tmax = np.where(rng.uniform(size=m) < 0.5, np.inf, rng.uniform(0.1, 3.0, size=m))
    return starts, vecs, tmax


@pytest.mark.parametrize("use_numba", [False, pytest.param(True, marks=pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba missing"))])
def test_segment_distances_against_oracle(use_numba):
    rng = np.random.default_rng(71)
    for n in (1, 2, 3, 4):
        pts = rng.normal(scale=2, size=(40, n))
        starts, vecs, tmax = random_segments(rng, 5, n)
        exact = kernels.segment_distances(pts, starts, vecs, tmax, use_numba=use_numba)
        approx = brute_segment(pts, starts, vecs, tmax)
        assert np.all(exact <= approx + 1e-12)
        assert np.all(exact >= approx - 3.0 * 50.0 / 20000)


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba missing")
def test_backends_bit_identical():
    rng = np.random.default_rng(72)
    pts = rng.normal(size=(2000, 3))
    starts, vecs, tmax = random_segments(rng, 9, 3)
    a = kernels.segment_distances(pts, starts, vecs, tmax, use_numba=True)
    b = kernels.segment_distances(pts, starts, vecs, tmax, use_numba=False)
    assert np.array_equal(a, b)
    cloud = rng.normal(size=(5000, 3))
    a = kernels.nearest_distances(pts, cloud, use_numba=True)
    b = kernels.nearest_distances(pts, cloud, use_numba=False)
    assert np.array_equal(a, b)


def test_nearest_distances_oracle():
    rng = np.random.default_rng(73)
    q, c = rng.normal(size=(50, 2)), rng.normal(size=(80, 2))
    brute = np.abs(q[:, None, :] - c[None, :, :]).max(axis=2).min(axis=1)
    assert np.array_equal(kernels.nearest_distances(q, c), brute)


def test_zero_direction_segment_is_a_point():
    d = kernels.segment_distances(np.array([[1.0, 2.0]]), np.zeros((1, 2)), np.zeros((1, 2)), np.array([np.inf]))
    assert d[0] == 2.0


def test_env_flag_selects_numpy():
    env = dict(os.environ, TROPSPINE_DISABLE_NUMBA="1")
    code = "from tropspine import kernels; print(kernels.backend())"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["TROPSPINE_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == ("numba" if kernels.HAS_NUMBA else "numpy")

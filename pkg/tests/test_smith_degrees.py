import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_degree
from tropspine import (
    ToricDegree,
    line_degree,
    psi_apply,
    psi_norm,
    psi_preimage,
    smith_normal_form,
    torus_apply,
    torus_preimage,
    validate_degree,
)
from tropspine.errors import DegenerateDegree, DimensionMismatch, SumNotZero, ZeroCoefficient

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_form_properties(A):
    sf = smith_normal_form(A)
    A_ = np.array(A, dtype=object)
    L, R, D = (np.array(x, dtype=object) for x in (sf.L, sf.R, sf.D))
    assert (L.dot(A_).dot(R) == D).all()
    assert (L.dot(np.array(sf.L_inv, dtype=object)) == np.eye(len(A), dtype=int)).all()
    assert (R.dot(np.array(sf.R_inv, dtype=object)) == np.eye(len(A[0]), dtype=int)).all()
    diag = sf.diagonal
    assert len(diag) == sf.rank == np.linalg.matrix_rank(np.array(A, dtype=float))
    assert all(d > 0 for d in diag)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))
    off = D.copy()
    for i, d in enumerate(diag):
        off[i, i] -= d
    assert not off.any()


def test_smith_known_example():
    sf = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert sf.diagonal == [2, 6, 12]


def test_validate_degree_examples():
    d = validate_degree([[1, 1], [-1, 0], [0, -1]])
    assert d == line_degree(2) and d.nondegenerate
    d = validate_degree([[1, 0], [-1, 0]])
    assert not d.nondegenerate
    with pytest.raises(SumNotZero):
        validate_degree([[1, 0], [1, 0]])
    with pytest.raises(DimensionMismatch):
        validate_degree([[1, 0], [-1]])


def test_psi_apply_examples():
    for n in (1, 2, 4):
        psi = line_degree(n).psi
        e1 = np.eye(n)[0]
        assert np.array_equal(psi_apply(psi, e1), e1)
        assert np.array_equal(psi_apply(psi, np.zeros(n)), np.zeros(n))
    psi = ToricDegree(((2, 2), (-2, 0), (0, -2))).psi
    assert np.array_equal(psi_apply(psi, [1, 0]), [2, 0])


def brute_norm(M):
    """max ||M x||_inf over the vertices of the unit cube."""
    M = np.asarray(M)
    return max(np.abs(M @ np.array(s)).max() for s in itertools.product((-1, 1), repeat=M.shape[1]))


def test_psi_norm_examples_and_oracle():
    assert psi_norm(line_degree(3).psi) == 1
    assert psi_norm(ToricDegree(((2, 2), (-2, 0), (0, -2))).psi) == 2
    # Matrix rows (1, -3), (0, 2) arise from columns -delta_i.
    deg = ToricDegree(((1, 1), (-1, 0), (3, -2)))
    assert np.array_equal(deg.psi.matrix, [[1, -3], [0, 2]])
    assert psi_norm(deg.psi) == 4
    rng = np.random.default_rng(1)
    for _ in range(100):
        deg = random_degree(rng)
        assert psi_norm(deg.psi) == brute_norm(deg.psi.matrix)


def test_psi_preimage():
    assert np.allclose(psi_preimage(line_degree(3).psi, np.ones(3)), np.ones(3))
    assert np.allclose(psi_preimage(ToricDegree(((2, 2), (-2, 0), (0, -2))).psi, [2, 0]), [1, 0])
    rng = np.random.default_rng(2)
    for _ in range(100):
        psi = random_degree(rng).psi
        y = rng.normal(scale=5, size=psi.n)
        assert np.abs(psi_apply(psi, psi_preimage(psi, y)) - y).max() <= 1e-12 * max(1, np.abs(y).max())
    with pytest.raises(DegenerateDegree):
        psi_preimage(ToricDegree(((1, 0), (-1, 0))).psi, [1, 0])


def test_torus_preimage():
    kappa = np.array([2 - 1j, 0.5j, 3.0])
    assert np.allclose(torus_preimage(line_degree(3).psi, kappa), kappa)
    # M = (1 1): lam_1 lam_2 = 4.
    psi = ToricDegree(((2,), (-1,), (-1,))).psi
    lam = torus_preimage(psi, np.array([4.0]))
    assert abs(lam[0] * lam[1] - 4) <= 1e-12
    rng = np.random.default_rng(3)
    for _ in range(100):
        psi = random_degree(rng).psi
        kappa = np.exp(rng.normal(scale=2, size=psi.n) + 2j * np.pi * rng.uniform(size=psi.n))
        lam = torus_preimage(psi, kappa)
        assert np.all(np.isfinite(lam)) and np.all(lam != 0)
        assert (np.abs(torus_apply(psi, lam) - kappa) / np.abs(kappa)).max() <= 1e-9
    with pytest.raises(ZeroCoefficient):
        torus_preimage(line_degree(2).psi, np.array([1.0, 0.0]))


def test_commuting_diagram():
    rng = np.random.default_rng(4)
    for _ in range(50):
        psi = random_degree(rng).psi
        z = np.exp(rng.uniform(-8, 8, size=(20, psi.k)) + 2j * np.pi * rng.uniform(size=(20, psi.k)))
        lhs = np.log(np.abs(torus_apply(psi, z)))
        rhs = psi_apply(psi, np.log(np.abs(z)))
        assert np.abs(lhs - rhs).max() <= 1e-9 * max(1.0, np.abs(rhs).max())

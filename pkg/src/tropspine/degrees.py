"""Toric degrees, the linear map psi and the torus homomorphism Psi.

A toric degree is an ordered list ``(delta_0, ..., delta_k)`` of integer
vectors in Z^n summing to zero.  The associated linear map
``psi: R^k -> R^n`` sends ``e_i`` to ``-delta_i`` for ``i = 1..k``; with the
convention ``e_0 = -(e_1 + ... + e_k)`` it also sends ``e_0`` to
``-delta_0``.  Its exponential ``Psi: (C*)^k -> (C*)^n`` is
``Psi(z)_j = prod_i z_i ** M[j, i]``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateDegree,
    DimensionMismatch,
    EmptyDegree,
    SumNotZero,
    ZeroCoefficient,
)
from .smith import smith_normal_form


@dataclass(frozen=True)
class ToricDegree:
    vectors: tuple

    def __post_init__(self):
        vecs = tuple(tuple(int(x) for x in v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)

    @property
    def n(self):
        return len(self.vectors[0])

    @property
    def k(self):
        return len(self.vectors) - 1

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    @cached_property
    def array(self):
        return np.array(self.vectors, dtype=np.int64).reshape(len(self.vectors), -1)

    @cached_property
    def psi(self):
        return PsiMap(self)

    @property
    def nondegenerate(self):
        return self.psi.rank == self.n

    def sorted_key(self):
        """Order-independent key, for comparing degrees as multisets."""
        return tuple(sorted(self.vectors))

    def __repr__(self):
        return f"ToricDegree({list(map(list, self.vectors))})"


def line_degree(n):
    """The degree of a line in R^n: ``((1,...,1), -e_1, ..., -e_n)``."""
    vecs = [tuple([1] * n)]
    for i in range(n):
        vecs.append(tuple(-int(i == j) for j in range(n)))
    return ToricDegree(tuple(vecs))


def validate_degree(vectors):
    """Build a :class:`ToricDegree`, checking shape and the zero-sum condition."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        raise EmptyDegree("a toric degree needs at least one vector")
    n = len(vectors[0])
    if n < 1:
        raise DimensionMismatch("vectors must have positive length")
    for i, v in enumerate(vectors):
        if len(v) != n:
            raise DimensionMismatch(f"vector {i} has length {len(v)}, expected {n}")
        if any(int(x) != x for x in v):
            raise DimensionMismatch(f"vector {i} is not integral")
    total = [sum(int(v[j]) for v in vectors) for j in range(n)]
    if any(total):
        raise SumNotZero(f"vectors sum to {total}, not zero")
    if len(vectors) < 2:
        raise EmptyDegree("a toric degree needs at least two vectors")
    return ToricDegree(tuple(tuple(int(x) for x in v) for v in vectors))


class PsiMap:
    """The n x k integer matrix whose column i is ``-delta_i`` (i = 1..k)."""

    def __init__(self, degree):
        self.degree = degree
        self.matrix = -degree.array[1:].T.copy()
        self.matrix.setflags(write=False)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def k(self):
        return self.matrix.shape[1]

    @cached_property
    def smith(self):
        return smith_normal_form(self.matrix.tolist())

    @property
    def rank(self):
        return self.smith.rank

    def _require_nondegenerate(self):
        if self.rank < self.n:
            raise DegenerateDegree(f"psi has rank {self.rank} < n = {self.n}")


def psi_apply(psi, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != psi.k:
        raise DimensionMismatch(f"expected length {psi.k}, got {x.shape[-1]}")
    return x @ psi.matrix.T.astype(np.float64)


def psi_norm(psi):
    """The sup-norm operator norm, i.e. the largest absolute row sum (exact int)."""
    if psi.k == 0:
        return 0
    return int(np.abs(psi.matrix).sum(axis=1).max())


def _solve_via_smith(psi, y):
    # M = L_inv D R_inv, so M x = y  <=>  D (R_inv x) = L y.
    psi._require_nondegenerate()
    sf = psi.smith
    L = np.array(sf.L, dtype=np.float64)
    R = np.array(sf.R, dtype=np.float64)
    Ly = L @ y
    u = np.zeros(psi.k, dtype=y.dtype)
    u[: sf.rank] = Ly[: sf.rank] / np.array(sf.diagonal, dtype=np.float64)
    x = R @ u
    # The trailing columns of R span ker M.  Dropping the kernel component
    # gives the minimum-norm solution; R can have large entries, and without
    # this exp() of the result over- or underflows.
    if sf.rank < psi.k:
        Q, _ = np.linalg.qr(R[:, sf.rank:])
        x = x - Q @ (Q.T @ x)
    M = psi.matrix.astype(np.float64)
    return x + np.linalg.lstsq(M, y - M @ x, rcond=None)[0]


def psi_preimage(psi, target):
    """Some ``x`` in R^k with ``psi(x) == target`` (unique up to ker psi)."""
    y = np.asarray(target, dtype=np.float64)
    if y.shape != (psi.n,):
        raise DimensionMismatch(f"expected length {psi.n}, got {y.shape}")
    return _solve_via_smith(psi, y)


def torus_apply(psi, z):
    """``Psi(z)_j = prod_i z_i ** M[j, i]``, evaluated through complex logs."""
    z = np.asarray(z, dtype=np.complex128)
    if z.shape[-1] != psi.k:
        raise DimensionMismatch(f"expected length {psi.k}, got {z.shape[-1]}")
    return np.exp(np.log(z) @ psi.matrix.T.astype(np.float64))


def torus_preimage(psi, kappa):
    """Some ``lam`` in (C*)^k with ``Psi(lam) == kappa``.

    We solve ``M x = log(kappa)`` over C in Smith coordinates (dividing by the
    elementary divisors takes principal d-th roots) and return ``exp(x)``.
    The answer is one representative modulo ``ker Psi``.
    """
    kappa = np.asarray(kappa, dtype=np.complex128)
    if kappa.shape != (psi.n,):
        raise DimensionMismatch(f"expected length {psi.n}, got {kappa.shape}")
    if np.any(kappa == 0):
        raise ZeroCoefficient("all coefficients must be nonzero")
    return np.exp(_solve_via_smith(psi, np.log(kappa)))

"""Seeded random instances shared by the test modules."""

import numpy as np

from tropspine import ComplexLine, ComplexRationalCurve, ModuliPoint, ToricDegree
from tropspine.degrees import line_degree
from tropspine.limits import enumerate_trees

_TREES = {}


def disk_points(rng, k, radius=10.0, separation=1e-3):
    """k points uniform in a disk with pairwise separation at least ``separation``."""
    while True:
        a = radius * np.sqrt(rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k))
        gaps = np.abs(a[:, None] - a[None, :])
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() >= separation:
            return a


def random_line(rng, n, calibrated=True):
    a = disk_points(rng, n)
    if calibrated:
        return ComplexLine(a)
    kappa = np.exp(rng.uniform(-2, 2, size=n) + 2j * np.pi * rng.uniform(size=n))
    return ComplexLine(a, kappa)


def random_degree(rng, max_n=3, max_k=5, max_entry=3):
    """Non-degenerate degree with n <= max_n, k <= max_k non-root vectors and
    entries (including the root vector) bounded by max_entry."""
    while True:
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(n, max_k + 1))
        rest = rng.integers(-max_entry, max_entry + 1, size=(k, n))
        root = -rest.sum(axis=0)
        if np.abs(root).max() > max_entry:
            continue
        deg = ToricDegree(tuple(map(tuple, np.vstack([root, rest]).tolist())))
        if deg.nondegenerate:
            return deg


def random_curve(rng, degree):
    a = disk_points(rng, degree.k)
    mag = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=degree.n))
    kappa = mag * np.exp(2j * np.pi * rng.uniform(size=degree.n))
    return ComplexRationalCurve(degree, a, kappa)


def trees(n_leaves):
    if n_leaves not in _TREES:
        _TREES[n_leaves] = list(enumerate_trees(n_leaves))
    return _TREES[n_leaves]


def random_moduli_point(rng, degree=None, n=None):
    """A random point of the moduli space of a degree (default: a random one)."""
    if degree is None:
        degree = random_degree(rng, max_n=n or 3) if n is None or n <= 3 else line_degree(n)
    pool = trees(len(degree))
    tree = pool[int(rng.integers(len(pool)))]
    base = int(rng.integers(tree.n_vertices))
    position = rng.normal(scale=3.0, size=degree.n)
    lengths = rng.uniform(0.05, 4.0, size=len(tree.edges))
    return ModuliPoint(degree, tree, base, position, lengths)

"""Shared fixtures and small helper spaces for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from divicover.metric import FiniteMetricSpace


@pytest.fixture
def line3() -> FiniteMetricSpace:
    """Three points 0, 0.5, 1 on the line."""
    return FiniteMetricSpace([0.0, 0.5, 1.0])


@pytest.fixture
def unit_square() -> FiniteMetricSpace:
    """Corners of the unit square under l2."""
    return FiniteMetricSpace([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])


def random_space(rng: np.random.Generator, n: int, d: int, metric: str = "l2", p=None) -> FiniteMetricSpace:
    return FiniteMetricSpace(rng.standard_normal((n, d)), metric=metric, p=p)


def dist_ref(space: FiniteMetricSpace, a: int, b: int) -> float:
    """Reference distance mirroring the library's arithmetic exactly."""
    diff = space.points[a] - space.points[b]
    if space.p == np.inf:
        return float(np.abs(diff).max())
    if space.p == 2.0:
        return float(np.sqrt(np.square(diff).sum()))
    return float(np.power(np.abs(diff), space.p).sum() ** (1.0 / space.p))


def brute_diameter(space: FiniteMetricSpace, idx: np.ndarray):
    """Reference diameter: full pairwise scan, lexicographically first pair."""
    idx = np.asarray(idx)
    best, pair = -1.0, None
    for a in range(idx.size):
        for b in range(a + 1, idx.size):
            dv = dist_ref(space, int(idx[a]), int(idx[b]))
            if dv > best:
                best, pair = dv, (int(idx[a]), int(idx[b]))
    if pair is None:
        return 0.0, (int(idx[0]), int(idx[0]))
    return best, pair


def brute_radius(space: FiniteMetricSpace, idx: np.ndarray):
    """Reference covering radius: scan every candidate center in the space."""
    idx = np.asarray(idx)
    best, center = np.inf, 0
    for c in range(space.n):
        reach = max(dist_ref(space, c, int(i)) for i in idx)
        if reach < best:
            best, center = reach, c
    return best, center

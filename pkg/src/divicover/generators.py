"""Synthetic point clouds with known topology, for benchmarks and tests."""

from __future__ import annotations

import numpy as np

from .metric import FiniteMetricSpace, UsageError

__all__ = ["generate_sphere", "generate_torus"]


def generate_sphere(
    n: int = 1000,
    mean_r: float = 1.0,
    sd_r: float = 0.1,
    seed: int = 0,
    metric: str = "l2",
) -> FiniteMetricSpace:
    """Noisy sphere in R^3: uniform directions, normally distributed radii.

    Directions are normalized 3-dimensional standard Gaussians (uniform on
    the sphere); each point's radius is drawn from Normal(mean_r, sd_r).
    Deterministic for a fixed seed.
    """
    if n < 1:
        raise UsageError("n must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, 3))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms < 1e-12):  # essentially impossible, but keep it total
        bad = norms < 1e-12
        g[bad] = rng.standard_normal((int(bad.sum()), 3))
        norms = np.linalg.norm(g, axis=1)
    radii = rng.normal(mean_r, sd_r, n) if sd_r > 0 else np.full(n, float(mean_r))
    return FiniteMetricSpace(g / norms[:, None] * radii[:, None], metric)


def generate_torus(k: int = 20, seed: int = 0, metric: str = "l2") -> FiniteMetricSpace:
    """Flat torus in R^4: the product of two unit circles, k points each.

    Draws k uniform angles per circle and takes all k^2 combinations
    (cos a_i, sin a_i, cos b_j, sin b_j); every point has norm sqrt(2).
    """
    if k < 1:
        raise UsageError("k must be >= 1")
    rng = np.random.default_rng(seed)
    alpha = rng.uniform(0.0, 2.0 * np.pi, k)
    beta = rng.uniform(0.0, 2.0 * np.pi, k)
    a = np.repeat(alpha, k)
    b = np.tile(beta, k)
    pts = np.column_stack([np.cos(a), np.sin(a), np.cos(b), np.sin(b)])
    return FiniteMetricSpace(pts, metric)

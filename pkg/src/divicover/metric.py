"""Finite metric spaces: distances, diameters and covering radii.

Everything downstream works with a :class:`FiniteMetricSpace` plus index
subsets, so points are stored once and subsets are just sorted integer
arrays.  All argmin/argmax style choices break ties toward the smallest
index, which keeps every pipeline deterministic for a fixed input.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "FiniteMetricSpace",
    "UsageError",
    "distance",
    "diameter",
    "relative_radius",
    "effective_delta",
]

# Full pairwise matrices are cached only up to this many points; larger
# spaces are scanned in fixed-size chunks instead.
CACHE_MAX_POINTS = 2048

# Cap on temporary elements in one vectorized distance block.
_BLOCK_ELEMS = 1 << 22

_METRICS = ("l2", "linf", "lp")


class UsageError(ValueError):
    """A caller violated a documented precondition."""


class FiniteMetricSpace:
    """Points in ``R^d`` under an ``l2``, ``linf`` or general ``lp`` metric.

    Parameters
    ----------
    points : array-like, shape (n, d)
        Coordinates; a 1-d array is treated as n points on the line.
    metric : str
        One of ``"l2"``, ``"linf"``, ``"lp"``.
    p : float, optional
        Exponent for ``"lp"`` (must satisfy ``1 <= p < inf``); forbidden
        for the other metrics.
    """

    def __init__(self, points, metric: str = "l2", p: float | None = None):
        pts = np.array(points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise UsageError("points must be a nonempty (n, d) array")
        if not np.all(np.isfinite(pts)):
            raise UsageError("points must have finite coordinates")
        if metric not in _METRICS:
            raise UsageError(f"unknown metric {metric!r}; expected one of {_METRICS}")
        if metric == "lp":
            if p is None or not (1.0 <= p < math.inf):
                raise UsageError("metric 'lp' requires a finite exponent p >= 1")
            self.p = float(p)
        else:
            if p is not None:
                raise UsageError("exponent p is only meaningful for metric 'lp'")
            self.p = 2.0 if metric == "l2" else math.inf
        pts.setflags(write=False)
        self.points = pts
        self.metric = metric
        self._dist: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __repr__(self) -> str:  # pragma: no cover
        suffix = f", p={self.p}" if self.metric == "lp" else ""
        return f"FiniteMetricSpace(n={self.n}, dim={self.dim}, metric={self.metric!r}{suffix})"

    def _block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        diff = self.points[rows][:, None, :] - self.points[cols][None, :, :]
        if self.p == math.inf:
            return np.abs(diff).max(axis=2)
        if self.p == 2.0:
            return np.sqrt(np.square(diff).sum(axis=2))
        return np.power(np.abs(diff), self.p).sum(axis=2) ** (1.0 / self.p)

    def pairwise(self, rows, cols) -> np.ndarray:
        """Distance block of shape ``(len(rows), len(cols))``."""
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        out = np.empty((rows.size, cols.size), dtype=np.float64)
        step = max(1, _BLOCK_ELEMS // max(1, cols.size * self.dim))
        for s in range(0, rows.size, step):
            out[s : s + step] = self._block(rows[s : s + step], cols)
        return out

    def dist_matrix(self) -> np.ndarray | None:
        """The full cached pairwise matrix, or None when the space is too big."""
        if self._dist is None and self.n <= CACHE_MAX_POINTS:
            idx = np.arange(self.n)
            self._dist = self.pairwise(idx, idx)
            self._dist.setflags(write=False)
        return self._dist


def _subset(space: FiniteMetricSpace, subset) -> np.ndarray:
    if subset is None:
        return np.arange(space.n, dtype=np.int64)
    idx = np.asarray(subset, dtype=np.int64).ravel()
    if idx.size == 0:
        raise UsageError("subset must be nonempty")
    if idx.min() < 0 or idx.max() >= space.n:
        raise UsageError("subset index out of range")
    return np.unique(idx)


def distance(space: FiniteMetricSpace, i: int, j: int) -> float:
    """Distance between points ``i`` and ``j``."""
    i, j = int(i), int(j)
    if not (0 <= i < space.n and 0 <= j < space.n):
        raise UsageError("point index out of range")
    return float(space.pairwise([i], [j])[0, 0])


def diameter(space: FiniteMetricSpace, subset=None) -> tuple[float, tuple[int, int]]:
    """Largest pairwise distance within ``subset``, with one realizing pair.

    Returns ``(value, (i, j))`` where ``i <= j`` are global point indices.
    Among all realizing pairs the lexicographically smallest is returned; a
    singleton subset has diameter ``0.0`` realized by ``(i, i)``.
    """
    idx = _subset(space, subset)
    if idx.size == 1:
        i = int(idx[0])
        return 0.0, (i, i)
    if space.metric == "linf":
        return _diameter_linf(space, idx)

    dist = space.dist_matrix()
    if dist is not None:
        sub = dist[np.ix_(idx, idx)]
        k = idx.size
        sub[np.tril_indices(k)] = -1.0
        a, b = divmod(int(np.argmax(sub)), k)
        return float(sub[a, b]), (int(idx[a]), int(idx[b]))

    # Chunked upper-triangle scan; strict improvement keeps the first
    # (lexicographically smallest) realizing pair.
    k = idx.size
    pos = np.arange(k)
    best = -1.0
    pair = (int(idx[0]), int(idx[0]))
    step = max(1, _BLOCK_ELEMS // max(1, k * space.dim))
    for s in range(0, k - 1, step):
        rows = idx[s : s + step]
        block = space.pairwise(rows, idx)
        mask = pos[None, :] <= pos[s : s + step, None]
        block[mask] = -1.0
        m = float(block.max())
        if m > best:
            a, b = divmod(int(np.argmax(block)), k)
            best = m
            pair = (int(idx[s + a]), int(idx[b]))
    return best, pair


def _diameter_linf(space: FiniteMetricSpace, idx: np.ndarray) -> tuple[float, tuple[int, int]]:
    # The sup diameter is the largest coordinate spread, and a point can be
    # in a realizing pair iff its own reach attains that spread.
    sub = space.points[idx]
    mn = sub.min(axis=0)
    mx = sub.max(axis=0)
    value = float((mx - mn).max())
    if value == 0.0:
        # all points coincide; every distinct pair realizes 0
        return 0.0, (int(idx[0]), int(idx[1]))
    reach = np.maximum(mx - sub, sub - mn).max(axis=1)
    a = int(np.argmax(reach == value))
    d_from_a = np.abs(sub - sub[a]).max(axis=1)
    b = int(np.nonzero(d_from_a == value)[0][0])
    i, j = int(idx[a]), int(idx[b])
    return value, (i, j) if i <= j else (j, i)


def relative_radius(space: FiniteMetricSpace, subset=None) -> tuple[float, int]:
    """Smallest radius at which one ball centered in the space covers ``subset``.

    Centers range over *all* points of the space, not just the subset.
    Returns ``(value, center)`` with the smallest optimal center index.
    The value always lies between half the subset diameter and the full
    subset diameter.
    """
    idx = _subset(space, subset)
    if space.metric == "linf":
        sub = space.points[idx]
        mn = sub.min(axis=0)
        mx = sub.max(axis=0)
        reach = np.maximum(mx - space.points, space.points - mn).max(axis=1)
        c = int(np.argmin(reach))
        return float(reach[c]), c

    dist = space.dist_matrix()
    if dist is not None:
        reach = dist[:, idx].max(axis=1)
        c = int(np.argmin(reach))
        return float(reach[c]), c

    best = math.inf
    center = 0
    step = max(1, _BLOCK_ELEMS // max(1, idx.size * space.dim))
    for s in range(0, space.n, step):
        rows = np.arange(s, min(s + step, space.n))
        reach = space.pairwise(rows, idx).max(axis=1)
        m = float(reach.min())
        if m < best:
            best = m
            center = s + int(np.argmin(reach))
    return best, center


def effective_delta(delta: float, dim: int, p: float) -> float:
    """Adjust a division parameter across equivalent metrics on ``R^dim``.

    The sup metric and the ``lp`` metric differ by a factor of at most
    ``dim ** (1/p)``, so a ``delta``-division under one is only guaranteed
    to be a ``delta * dim ** (-1/p)``-division under the other.  For
    ``p = inf`` the two metrics agree and ``delta`` is returned unchanged.
    """
    delta = float(delta)
    if not (0.0 < delta <= 1.0):
        raise UsageError("delta must lie in (0, 1]")
    if int(dim) != dim or dim < 1:
        raise UsageError("dim must be a positive integer")
    if p != math.inf and not p >= 1.0:
        raise UsageError("p must be >= 1 or math.inf")
    if p == math.inf:
        return delta
    return delta * float(dim) ** (-1.0 / float(p))

"""Divisive covers: split a space top-down into overlapping pieces.

A division takes a subset and returns two proper subsets that together
cover it and overlap enough that every small ball lands entirely inside
one part (the delta-division property).  ``divisive_cover`` applies a
division strategy repeatedly, always to the active piece of largest
diameter, until every piece fits in a ball of the requested resolution.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .metric import FiniteMetricSpace, UsageError, _subset, diameter, distance, relative_radius

__all__ = [
    "CoverElement",
    "DivisionStrategy",
    "DivisiveCover",
    "IndivisibleSubset",
    "decision_division",
    "divisive_cover",
    "ellipsoid_division",
    "verify_delta_division",
]


class IndivisibleSubset(Exception):
    """The subset has zero diameter, so no proper two-part cover exists."""


def ellipsoid_division(
    space: FiniteMetricSpace,
    subset,
    delta: float,
    farthest: tuple[int, int] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Split ``subset`` into two overlapping parts anchored at a farthest pair.

    With ``(y1, y2)`` a farthest pair and ``f = (1 - 2*delta)/(1 + 2*delta)``,
    part 1 keeps the points with ``f*d(y, y1) <= d(y, y2)`` and part 2 the
    points with ``f*d(y, y2) <= d(y, y1)``.  Points may land in both parts;
    each anchor is excluded from the opposite part, so both are proper.
    Works under any metric for ``0 < delta < 1/2``.

    ``farthest`` may supply a precomputed realizing pair to avoid a rescan.
    """
    if not 0.0 < delta < 0.5:
        raise UsageError("ellipsoid division requires 0 < delta < 1/2")
    idx = _subset(space, subset)
    if farthest is None:
        diam, farthest = diameter(space, idx)
    else:
        diam = distance(space, *farthest)
    if diam <= 0.0:
        raise IndivisibleSubset("subset has zero diameter")
    y1, y2 = farthest
    d1 = space.pairwise([y1], idx)[0]
    d2 = space.pairwise([y2], idx)[0]
    f = (1.0 - 2.0 * delta) / (1.0 + 2.0 * delta)
    return idx[f * d1 <= d2], idx[f * d2 <= d1]


def decision_division(
    space: FiniteMetricSpace,
    subset,
    delta: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Split ``subset`` by thresholding one coordinate (sup metric only).

    The splitting coordinate is the one with the largest spread (lowest
    index on ties) — its extremes realize the sup-metric diameter.  Each
    part keeps the points within ``(1 + delta)/2`` of the spread from one
    end, so the parts overlap in a middle band of fraction ``delta``.
    Valid for ``0 < delta < 1``.
    """
    if space.metric != "linf":
        raise UsageError("decision division requires the linf metric")
    if not 0.0 < delta < 1.0:
        raise UsageError("decision division requires 0 < delta < 1")
    idx = _subset(space, subset)
    sub = space.points[idx]
    mn = sub.min(axis=0)
    mx = sub.max(axis=0)
    spread = mx - mn
    c = int(np.argmax(spread))
    if spread[c] <= 0.0:
        raise IndivisibleSubset("subset has zero diameter")
    thr = 0.5 * (1.0 + delta) * spread[c]
    coord = sub[:, c]
    return idx[coord - mn[c] <= thr], idx[mx[c] - coord <= thr]


@dataclass(frozen=True)
class DivisionStrategy:
    """A named division procedure with its overlap parameter.

    kind : ``"ellipsoid"`` (any metric, ``0 < delta < 1/2``) or
    ``"decision"`` (linf only, ``0 < delta < 1``).
    """

    kind: str
    delta: float

    def __post_init__(self):
        if self.kind not in ("ellipsoid", "decision"):
            raise UsageError(f"unknown division kind {self.kind!r}")
        if self.kind == "ellipsoid" and not 0.0 < self.delta < 0.5:
            raise UsageError("ellipsoid division requires 0 < delta < 1/2")
        if self.kind == "decision" and not 0.0 < self.delta < 1.0:
            raise UsageError("decision division requires 0 < delta < 1")

    def divide(
        self,
        space: FiniteMetricSpace,
        subset,
        farthest: tuple[int, int] | None = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        if self.kind == "ellipsoid":
            return ellipsoid_division(space, subset, self.delta, farthest)
        return decision_division(space, subset, self.delta)


@dataclass
class CoverElement:
    """One subset in a divisive cover, with its cached measurements."""

    id: int
    subset: np.ndarray  # sorted unique global point indices
    radius: float  # covering radius from the best center anywhere in X
    center: int  # a point index realizing the radius
    diam: float
    farthest: tuple[int, int]  # a pair realizing the diameter
    parent: int | None = None
    children: tuple[int, int] | None = None

    @property
    def size(self) -> int:
        return int(self.subset.size)

    @property
    def is_leaf(self) -> bool:
        return self.children is None


@dataclass
class DivisiveCover:
    """Binary division tree of subsets; element 0 is the whole space.

    ``elements`` are in creation order, children of one division adjacent;
    treat as immutable once returned.
    """

    space: FiniteMetricSpace
    strategy: DivisionStrategy
    resolution: float
    elements: list[CoverElement]
    n_divisions: int

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def leaves(self) -> list[int]:
        return [e.id for e in self.elements if e.children is None]

    def divisions(self):
        """Yield (parent, part1, part2) element triples, in division order."""
        for e in self.elements:
            if e.children is not None:
                a, b = e.children
                yield e, self.elements[a], self.elements[b]


def _make_element(space: FiniteMetricSpace, eid: int, subset: np.ndarray, parent: int | None) -> CoverElement:
    diam, far = diameter(space, subset)
    radius, center = relative_radius(space, subset)
    return CoverElement(
        id=eid, subset=subset, radius=radius, center=center, diam=diam, farthest=far, parent=parent
    )


def divisive_cover(
    space: FiniteMetricSpace,
    strategy: DivisionStrategy,
    resolution: float,
    max_elements: int | None = None,
) -> DivisiveCover:
    """Divide the space until every active piece has radius <= resolution.

    Starting from the whole space, while some active element has covering
    radius above the resolution, the active element of largest diameter
    (lowest id on ties) is divided and replaced by its two parts.  The
    returned cover contains every element ever produced, including the
    whole space and all intermediates.  An element whose points all
    coincide cannot be divided and is kept as a leaf whatever its radius.

    ``max_elements`` optionally aborts runaway growth with an error.
    """
    resolution = float(resolution)
    if resolution < 0.0:
        raise UsageError("resolution must be >= 0")
    if strategy.kind == "decision" and space.metric != "linf":
        raise UsageError("decision division requires the linf metric")

    root = _make_element(space, 0, np.arange(space.n, dtype=np.int64), None)
    elements = [root]
    # Heap keyed by (-diam, id): pops the largest diameter, lowest id on ties.
    heap: list[tuple[float, int]] = [(-root.diam, 0)]
    n_over = 1 if root.radius > resolution else 0
    n_divisions = 0

    while n_over:
        _, k = heapq.heappop(heap)
        el = elements[k]
        try:
            parts = strategy.divide(space, el.subset, el.farthest)
        except IndivisibleSubset:
            # All points of el coincide; it stays an (undersized) leaf and
            # no longer counts toward the loop guard.
            if el.radius > resolution:
                n_over -= 1
            continue
        n_divisions += 1
        if el.radius > resolution:
            n_over -= 1
        kids = []
        for part in parts:
            child = _make_element(space, len(elements), part, k)
            if child.size >= el.size:
                raise RuntimeError("division did not shrink the subset")
            elements.append(child)
            heapq.heappush(heap, (-child.diam, child.id))
            if child.radius > resolution:
                n_over += 1
            kids.append(child.id)
        el.children = (kids[0], kids[1])
        if max_elements is not None and len(elements) > max_elements:
            raise UsageError(f"cover exceeded max_elements={max_elements}")

    return DivisiveCover(
        space=space,
        strategy=strategy,
        resolution=resolution,
        elements=elements,
        n_divisions=n_divisions,
    )


def verify_delta_division(
    space: FiniteMetricSpace,
    parent,
    part1,
    part2,
    delta: float,
    samples: int | None = None,
) -> bool:
    """Check that two parts really form a delta-division of the parent.

    Requires both parts to be proper subsets of the parent whose union is
    the parent, and for every ball center y in the parent the points of
    the parent within ``delta * radius(parent)`` of y (closed ball) must
    all lie in part 1 or all lie in part 2.  All centers are checked
    unless ``samples`` limits them to an evenly spaced subset.
    """
    par = _subset(space, parent)
    p1 = np.unique(np.asarray(part1, dtype=np.int64).ravel())
    p2 = np.unique(np.asarray(part2, dtype=np.int64).ravel())
    if p1.size == 0 or p2.size == 0:
        return False
    in1 = np.isin(par, p1, assume_unique=True)
    in2 = np.isin(par, p2, assume_unique=True)
    # parts must sit inside the parent, be proper, and jointly cover it
    if in1.sum() != p1.size or in2.sum() != p2.size:
        return False
    if p1.size >= par.size or p2.size >= par.size:
        return False
    if not np.all(in1 | in2):
        return False

    radius, _ = relative_radius(space, par)
    thr = float(delta) * radius
    centers = par
    if samples is not None and samples < par.size:
        centers = par[np.linspace(0, par.size - 1, samples).astype(np.int64)]
    ball = space.pairwise(centers, par) <= thr
    ok1 = (~ball | in1[None, :]).all(axis=1)
    ok2 = (~ball | in2[None, :]).all(axis=1)
    return bool(np.all(ok1 | ok2))

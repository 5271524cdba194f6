"""Brute-force references: enumerate-everything filtrations, rank-based
Betti numbers, and an exact log-scale bottleneck distance.

These are deliberately simple and slow; they exist to validate the
divisive pipeline on inputs small enough to enumerate, including the
multiplicative interleaving bound between the two barcodes.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .cover import DivisionStrategy, divisive_cover
from .metric import FiniteMetricSpace, UsageError
from .nerve import FilteredComplex, _row_keys, build_nerve
from .persistence import Barcode, compute_persistence

__all__ = [
    "betti_numbers",
    "cech_filtration",
    "gf2_rank",
    "log_bottleneck",
    "verify_interleaving",
]

CECH_GUARD = 64


def cech_filtration(
    space: FiniteMetricSpace, max_dim: int = 3, force: bool = False
) -> FilteredComplex:
    """Filtration of all point subsets by smallest enclosing-ball radius.

    Every subset of up to ``max_dim + 1`` points is a simplex; its value
    is the smallest radius at which one ball centered at a point of the
    space contains the whole subset.  Vertices therefore all enter at 0.
    Exponential in ``max_dim``; guarded to n <= 64 unless ``force``.
    """
    n = space.n
    if n > CECH_GUARD and not force:
        raise UsageError(
            f"brute-force filtration guarded to n <= {CECH_GUARD} points (force=True to override)"
        )
    if max_dim < 0:
        raise UsageError("max_dim must be >= 0")
    dist = space.pairwise(np.arange(n), np.arange(n))
    simplices: list[np.ndarray] = [np.arange(n, dtype=np.int32)[:, None]]
    values: list[np.ndarray] = [np.zeros(n)]
    for d in range(1, max_dim + 1):
        combos = np.array(
            list(itertools.combinations(range(n), d + 1)), dtype=np.int32
        ).reshape(-1, d + 1)
        if combos.shape[0] == 0:
            break
        vals = np.empty(combos.shape[0])
        step = max(1, (1 << 22) // max(1, n * (d + 1)))
        for s in range(0, combos.shape[0], step):
            block = dist[:, combos[s : s + step]]  # (n, c, d+1)
            vals[s : s + step] = block.max(axis=2).min(axis=0)
        simplices.append(combos)
        values.append(vals)
    return FilteredComplex(np.zeros(n), simplices, values, max_dim, np.arange(n))


def gf2_rank(mat: np.ndarray) -> int:
    """Rank of a 0/1 matrix over the two-element field."""
    mat = np.asarray(mat, dtype=bool)
    rows, cols = mat.shape
    if rows == 0 or cols == 0:
        return 0
    packed = np.packbits(mat, axis=1)
    rank = 0
    for c in range(cols):
        byte, shift = divmod(c, 8)
        mask = np.uint8(1 << (7 - shift))
        hits = np.nonzero(packed[rank:, byte] & mask)[0]
        if hits.size == 0:
            continue
        pivot = rank + int(hits[0])
        if pivot != rank:
            packed[[rank, pivot]] = packed[[pivot, rank]]
        rest = rank + 1 + np.nonzero(packed[rank + 1 :, byte] & mask)[0]
        packed[rest] ^= packed[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def _boundary_matrix(cx: FilteredComplex, dim: int) -> np.ndarray:
    """Unreduced boundary matrix of dimension ``dim`` as a 0/1 array."""
    faces, cofaces = cx.simplices(dim - 1), cx.simplices(dim)
    mat = np.zeros((faces.shape[0], cofaces.shape[0]), dtype=bool)
    if faces.shape[0] == 0 or cofaces.shape[0] == 0:
        return mat
    keys = _row_keys(faces)
    order = np.argsort(keys)
    keys_sorted = keys[order]
    for drop in range(dim + 1):
        fk = _row_keys(np.delete(cofaces, drop, axis=1))
        rows = order[np.searchsorted(keys_sorted, fk)]
        mat[rows, np.arange(cofaces.shape[0])] = True
    return mat


def betti_numbers(cx: FilteredComplex, t: float) -> list[int]:
    """Betti numbers of the subcomplex at ``t`` from boundary ranks.

    beta_k = #k-simplices - rank d_k - rank d_{k+1}, with all ranks over
    the two-element field.  Independent of the reduction pipeline.
    """
    sub = cx.at(t)
    counts = [sub.n_simplices(d) for d in range(sub.max_dim + 1)]
    ranks = [0] * (sub.max_dim + 2)
    for d in range(1, sub.max_dim + 1):
        ranks[d] = gf2_rank(_boundary_matrix(sub, d))
    return [counts[d] - ranks[d] - ranks[d + 1] for d in range(sub.max_dim + 1)]


def _log_diagram(barcode: Barcode, dim: int, floor: float):
    """Log-transformed points of one dimension, split finite/infinite.

    Intervals dead by ``floor`` are dropped; births are clamped up to
    ``floor`` (below the resolution the barcode carries no guarantee).
    """
    finite = []
    inf_births = []
    for k, b, d in barcode.intervals:
        if k != dim or d <= floor:
            continue
        lb = math.log(max(b, floor))
        if math.isinf(d):
            inf_births.append(lb)
        else:
            finite.append((lb, math.log(d)))
    return finite, sorted(inf_births)


def _hopcroft_karp(adj: list[list[int]], n_right: int) -> int:
    """Maximum matching size in a bipartite graph given as left adjacency."""
    inf = float("inf")
    match_l = [-1] * len(adj)
    match_r = [-1] * n_right
    size = 0
    while True:
        dist = [inf] * len(adj)
        queue = [u for u in range(len(adj)) if match_l[u] == -1]
        for u in queue:
            dist[u] = 0
        found = False
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            return size

        def try_augment(u: int) -> bool:
            for v in adj[u]:
                w = match_r[v]
                if w == -1 or (dist[w] == dist[u] + 1 and try_augment(w)):
                    match_l[u] = v
                    match_r[v] = u
                    return True
            dist[u] = inf
            return False

        for u in range(len(adj)):
            if match_l[u] == -1 and try_augment(u):
                size += 1


def _feasible(p: list, q: list, eps: float) -> bool:
    """Can every point be matched within ``eps``, allowing diagonal moves?

    Left side: points of p plus one diagonal slot per point of q; right
    side: points of q plus one diagonal slot per point of p.  A point may
    pair with its own diagonal projection when its half-persistence is
    within eps; diagonal slots pair with each other freely.
    """
    np_, nq = len(p), len(q)
    adj: list[list[int]] = []
    for i, (b1, d1) in enumerate(p):
        row = [j for j, (b2, d2) in enumerate(q) if max(abs(b1 - b2), abs(d1 - d2)) <= eps]
        if 0.5 * (d1 - b1) <= eps:
            row.append(nq + i)
        adj.append(row)
    diag_right = list(range(nq, nq + np_))
    for j, (b2, d2) in enumerate(q):
        row = list(diag_right)
        if 0.5 * (d2 - b2) <= eps:
            row.append(j)
        adj.append(row)
    return _hopcroft_karp(adj, nq + np_) == np_ + nq


def log_bottleneck(b1: Barcode, b2: Barcode, dim: int, floor: float) -> float:
    """Exact bottleneck distance between log-scale diagrams of one dimension.

    Filtration values are compared on a log scale, so a multiplicative
    discrepancy of factor c reads as an additive distance log(c).  ``floor``
    must be positive: intervals dead by it are ignored and births are
    clamped up to it.  Infinite bars must pair with infinite bars (sorted
    by birth); a mismatch in their counts gives ``inf``.
    """
    if not floor > 0.0:
        raise UsageError("floor must be positive")
    p, p_inf = _log_diagram(b1, dim, floor)
    q, q_inf = _log_diagram(b2, dim, floor)
    if len(p_inf) != len(q_inf):
        return math.inf
    d_inf = max((abs(a - b) for a, b in zip(p_inf, q_inf)), default=0.0)
    if not p and not q:
        return d_inf

    candidates = {0.0, d_inf}
    for b, d in p:
        candidates.add(0.5 * (d - b))
    for b, d in q:
        candidates.add(0.5 * (d - b))
    for b1_, d1_ in p:
        for b2_, d2_ in q:
            candidates.add(max(abs(b1_ - b2_), abs(d1_ - d2_)))
    grid = sorted(c for c in candidates if c >= d_inf)
    lo, hi = 0, len(grid) - 1
    if not _feasible(p, q, grid[hi]):  # largest candidate always feasible
        raise AssertionError("bottleneck search failed")
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(p, q, grid[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(grid[lo], d_inf)


def verify_interleaving(
    space: FiniteMetricSpace,
    strategy: DivisionStrategy,
    resolution: float,
    max_dim: int = 3,
    floor: float | None = None,
    force: bool = False,
) -> dict:
    """Run the divisive pipeline against the brute-force reference.

    Builds both barcodes, restricts them to filtration values >= the
    resolution, and checks that in every homology dimension below
    ``max_dim`` the log-scale bottleneck distance is at most log(1/delta)
    — division quality controls how far the approximation can drift.
    Returns a report dict with the measured distances.
    """
    cover = divisive_cover(space, strategy, resolution)
    nerve = build_nerve(cover, max_dim)
    divisive_bc = compute_persistence(nerve)
    reference_bc = compute_persistence(cech_filtration(space, max_dim, force=force))
    if floor is None:
        floor = resolution if resolution > 0 else 1.0
    bound = math.log(1.0 / strategy.delta)
    dims = []
    ok = True
    for d in range(max_dim):
        dist = log_bottleneck(divisive_bc, reference_bc, d, floor)
        passed = bool(dist <= bound * (1.0 + 1e-12) + 1e-12)
        dims.append({"dim": d, "distance": dist, "bound": bound, "pass": passed})
        ok = ok and passed
    return {
        "n": space.n,
        "metric": space.metric,
        "strategy": strategy.kind,
        "delta": strategy.delta,
        "resolution": resolution,
        "floor": floor,
        "cover_size": len(cover),
        "nerve_sizes": list(nerve.sizes()),
        "dims": dims,
        "pass": ok,
    }

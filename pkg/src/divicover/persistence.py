"""Persistence barcodes over the two-element field.

Simplices are ordered by (filtration value, dimension, vertex tuple) and
the anti-transpose of the global boundary matrix is column-reduced: each
column holds the cofacets of one simplex and is processed latest-first,
dimensions ascending.  The pivot pairs of the anti-transpose are exactly
the persistence pairs of the boundary matrix itself, but only simplices
of dimension < max_dim ever appear as columns, which is far cheaper when
the top dimension dominates the complex.  Pivots found in dimension d
clear the corresponding columns of dimension d+1 before they are reduced
(the usual clearing shortcut; results are identical without it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .nerve import FilteredComplex, _row_keys

__all__ = ["Barcode", "betti_at", "compute_persistence"]


@dataclass
class Barcode:
    """Multiset of (dimension, birth, death) intervals, death = inf allowed.

    Intervals are sorted by (dimension, birth, death).  ``meta`` carries
    run parameters (resolution, delta, normalization constant, ...), and
    ``n_zero_length`` counts intervals with birth == death, which are
    dropped from the list itself.  For ``max_dim > 0``, intervals of
    dimension ``max_dim`` are suppressed: without (max_dim+1)-simplices
    their deaths are unknown.
    """

    intervals: list[tuple[int, float, float]]
    max_dim: int
    meta: dict = field(default_factory=dict)
    n_zero_length: int = 0

    def in_dim(self, dim: int) -> list[tuple[float, float]]:
        return [(b, d) for (k, b, d) in self.intervals if k == dim]

    def rescaled(self, constant: float) -> Barcode:
        """Divide all births and deaths by a positive constant."""
        if not constant > 0.0:
            raise ValueError("normalization constant must be positive")
        scaled = [(k, b / constant, d / constant) for (k, b, d) in self.intervals]
        meta = dict(self.meta, normalize_constant=constant)
        return Barcode(scaled, self.max_dim, meta, self.n_zero_length)


def betti_at(barcode: Barcode, t: float) -> list[int]:
    """Betti numbers (beta_0, ..., beta_max_dim) at scale ``t``.

    Counts intervals with birth <= t < death.  For ``max_dim > 0`` the
    top entry is always 0 because top-dimensional intervals are suppressed.
    """
    out = [0] * (barcode.max_dim + 1)
    for k, b, d in barcode.intervals:
        if b <= t < d:
            out[k] += 1
    return out


def _global_order(cx: FilteredComplex):
    """Sort all simplices by (value, dimension, vertex tuple).

    Within one dimension the complex is already in canonical (value,
    tuple) order, so the position there resolves ties.  Returns the value
    and dimension of each global index plus, per dimension, the global
    index of every simplex.
    """
    counts = [cx.n_simplices(d) for d in range(cx.max_dim + 1)]
    vals = np.concatenate([cx.values(d) for d in range(cx.max_dim + 1)])
    dims = np.repeat(np.arange(cx.max_dim + 1), counts)
    pos = np.concatenate([np.arange(c) for c in counts]) if counts else np.empty(0, int)
    order = np.lexsort((pos, dims, vals))
    rank = np.empty(order.size, dtype=np.int64)
    rank[order] = np.arange(order.size)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    global_of = [rank[offsets[d] : offsets[d + 1]] for d in range(cx.max_dim + 1)]
    return vals[order], dims[order], global_of


def _face_columns(cx: FilteredComplex, dim: int, global_of) -> np.ndarray:
    """(N_dim, dim+1) global indices of the faces of every dim-simplex."""
    verts = cx.simplices(dim)
    face_keys = _row_keys(cx.simplices(dim - 1))
    face_order = np.argsort(face_keys)
    face_sorted = face_keys[face_order]
    cols = np.empty((verts.shape[0], dim + 1), dtype=np.int32)
    for drop in range(dim + 1):
        keys = _row_keys(np.delete(verts, drop, axis=1))
        pos = np.searchsorted(face_sorted, keys)
        local = face_order[pos]
        cols[:, drop] = global_of[dim - 1][local]
    return cols


def compute_persistence(cx: FilteredComplex) -> Barcode:
    """Barcode of a filtered complex by column reduction over F2."""
    n_total = sum(cx.n_simplices(d) for d in range(cx.max_dim + 1))
    g_val, g_dim, global_of = _global_order(cx)

    paired_birth = np.zeros(n_total, dtype=bool)
    is_death = np.zeros(n_total, dtype=bool)
    pairs: list[tuple[int, int]] = []

    for d in range(cx.max_dim):
        if cx.n_simplices(d) == 0 or cx.n_simplices(d + 1) == 0:
            continue
        # Cofacet lists, grouped by face: ravel the (d+1)-boundary matrix
        # and sort by face so each d-simplex owns a contiguous block.
        faces = _face_columns(cx, d + 1, global_of)
        owners = np.repeat(global_of[d + 1].astype(np.int64), d + 2)
        flat = faces.ravel()
        del faces
        by_face = np.argsort(flat, kind="stable")
        flat = flat[by_face]
        owners = owners[by_face]
        del by_face

        proc = np.sort(global_of[d])[::-1]  # latest simplex first
        left = np.searchsorted(flat, proc)
        right = np.searchsorted(flat, proc, side="right")
        # Reduced columns keyed by their pivot row, stored pivot included:
        # a single symmetric difference then cancels the pivot and adds the
        # remainder in one C-level set operation.
        columns: dict[int, frozenset[int]] = {}
        step = 1 << 16
        for start in range(0, proc.size, step):
            globals_ = proc[start : start + step].tolist()
            skip = is_death[proc[start : start + step]].tolist()
            lo = left[start : start + step].tolist()
            hi = right[start : start + step].tolist()
            for gj, cleared, a, b in zip(globals_, skip, lo, hi):
                if cleared:
                    continue
                col = set(owners[a:b].tolist())
                while col:
                    p = min(col)
                    other = columns.get(p)
                    if other is None:
                        columns[p] = frozenset(col)
                        pairs.append((gj, p))
                        paired_birth[gj] = True
                        is_death[p] = True
                        break
                    col ^= other

    intervals: list[tuple[int, float, float]] = []
    n_zero = 0
    for gb, gd in pairs:
        birth, death = float(g_val[gb]), float(g_val[gd])
        if birth == death:
            n_zero += 1
        else:
            intervals.append((int(g_dim[gb]), birth, death))
    essential = ~(paired_birth | is_death)
    for g in np.nonzero(essential)[0]:
        if cx.max_dim == 0 or g_dim[g] < cx.max_dim:
            intervals.append((int(g_dim[g]), float(g_val[g]), math.inf))
    intervals.sort()
    return Barcode(intervals, cx.max_dim, {}, n_zero)

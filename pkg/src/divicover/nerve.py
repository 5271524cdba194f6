"""Filtered simplicial complexes and the nerve of a divisive cover.

A simplex of the nerve is a family of cover elements with a common point;
it appears in the filtration at the largest covering radius among its
members.  Enumeration works by coface expansion: each k-simplex caches
the bitset of points common to its members, and extending by a higher
numbered vertex just ANDs one more membership bitset.
"""

from __future__ import annotations

import numpy as np

from .cover import DivisiveCover
from .metric import UsageError

__all__ = ["FilteredComplex", "build_nerve", "complex_at"]

# Cap on temporary elements in one expansion chunk (uint64 words).
_CHUNK_ELEMS = 1 << 21


def _canonical(verts: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if verts.shape[0] <= 1:
        return verts, vals
    keys = tuple(verts[:, c] for c in range(verts.shape[1] - 1, -1, -1)) + (vals,)
    order = np.lexsort(keys)
    return verts[order], vals[order]


def _row_keys(verts: np.ndarray) -> np.ndarray:
    """View simplex rows as scalars that sort lexicographically."""
    a = np.ascontiguousarray(verts, dtype=np.int32)
    return a.view([("", np.int32)] * a.shape[1]).ravel()


class FilteredComplex:
    """Simplices with filtration values, stored per dimension.

    Per dimension ``d`` the simplices form an ``(N_d, d+1)`` array of
    strictly increasing local vertex indices plus a value array, kept in
    canonical order (value, then vertex tuple).  ``vertex_ids`` maps local
    vertices to external labels (cover element ids, point indices, ...).
    Instances are immutable once constructed.
    """

    def __init__(
        self,
        vertex_values,
        simplices,
        values,
        max_dim: int,
        vertex_ids=None,
    ):
        self.vertex_values = np.asarray(vertex_values, dtype=np.float64)
        nv = self.vertex_values.size
        if vertex_ids is None:
            vertex_ids = np.arange(nv, dtype=np.int64)
        self.vertex_ids = np.asarray(vertex_ids, dtype=np.int64)
        if self.vertex_ids.size != nv:
            raise UsageError("vertex_ids length must match vertex_values")
        if max_dim < 0:
            raise UsageError("max_dim must be >= 0")
        self.max_dim = int(max_dim)

        self._simplices: list[np.ndarray] = []
        self._values: list[np.ndarray] = []
        for d in range(self.max_dim + 1):
            if d < len(simplices) and simplices[d] is not None and len(simplices[d]):
                verts = np.asarray(simplices[d], dtype=np.int32).reshape(-1, d + 1)
                vals = np.asarray(values[d], dtype=np.float64).ravel()
                if vals.size != verts.shape[0]:
                    raise UsageError(f"dimension {d}: {verts.shape[0]} simplices, {vals.size} values")
                if verts.min() < 0 or verts.max() >= nv:
                    raise UsageError(f"dimension {d}: vertex index out of range")
                if d > 0 and not np.all(verts[:, 1:] > verts[:, :-1]):
                    raise UsageError(f"dimension {d}: simplex vertices must strictly increase")
                verts, vals = _canonical(verts, vals)
            else:
                verts = np.empty((0, d + 1), dtype=np.int32)
                vals = np.empty(0, dtype=np.float64)
            verts.setflags(write=False)
            vals.setflags(write=False)
            self._simplices.append(verts)
            self._values.append(vals)

    @property
    def num_vertices(self) -> int:
        return self.vertex_values.size

    def simplices(self, dim: int) -> np.ndarray:
        """(N, dim+1) vertex rows of dimension ``dim``, canonical order."""
        return self._simplices[dim]

    def values(self, dim: int) -> np.ndarray:
        return self._values[dim]

    def n_simplices(self, dim: int) -> int:
        return self._simplices[dim].shape[0]

    def sizes(self) -> tuple[int, ...]:
        return tuple(s.shape[0] for s in self._simplices)

    def critical_values(self) -> np.ndarray:
        """Sorted distinct filtration values over all simplices."""
        return np.unique(np.concatenate(self._values)) if any(
            v.size for v in self._values
        ) else np.empty(0)

    def at(self, t: float) -> FilteredComplex:
        """The full subcomplex of simplices with value <= t."""
        simp, vals = [], []
        for d in range(self.max_dim + 1):
            keep = self._values[d] <= t
            simp.append(self._simplices[d][keep])
            vals.append(self._values[d][keep])
        return FilteredComplex(self.vertex_values, simp, vals, self.max_dim, self.vertex_ids)

    def __repr__(self) -> str:  # pragma: no cover
        return f"FilteredComplex(max_dim={self.max_dim}, sizes={self.sizes()})"

    def validate(self) -> None:
        """Assert face closure, value monotonicity and canonical order."""
        for d in range(self.max_dim + 1):
            verts, vals = self._simplices[d], self._values[d]
            if verts.shape[0] == 0:
                continue
            order_keys = tuple(verts[:, c] for c in range(d, -1, -1)) + (vals,)
            if not np.all(np.lexsort(order_keys) == np.arange(verts.shape[0])):
                raise AssertionError(f"dimension {d}: not in canonical order")
            if d == 0:
                if not np.all(vals == self.vertex_values[verts[:, 0]]):
                    raise AssertionError("vertex simplex value differs from vertex value")
                continue
            face_keys = _row_keys(self._simplices[d - 1])
            face_order = np.argsort(face_keys)
            face_sorted = face_keys[face_order]
            for drop in range(d + 1):
                faces = _row_keys(np.delete(verts, drop, axis=1))
                pos = np.searchsorted(face_sorted, faces)
                if pos.max(initial=-1) >= face_sorted.size or not np.all(
                    face_sorted[pos] == faces
                ):
                    raise AssertionError(f"dimension {d}: missing face")
                fvals = self._values[d - 1][face_order[pos]]
                if not np.all(fvals <= vals):
                    raise AssertionError(f"dimension {d}: face value exceeds coface value")


def complex_at(complex: FilteredComplex, t: float) -> FilteredComplex:
    """The full subcomplex at scale ``t`` (filtration values <= t)."""
    return complex.at(t)


def _pack_bitsets(subsets, n: int) -> np.ndarray:
    """Pack point-index subsets into rows of 64-bit words."""
    nbytes = ((n + 63) // 64) * 8
    packed = np.zeros((len(subsets), nbytes), dtype=np.uint8)
    chunk = max(1, (1 << 24) // max(1, nbytes * 8))
    for s in range(0, len(subsets), chunk):
        rows = subsets[s : s + chunk]
        bits = np.zeros((len(rows), nbytes * 8), dtype=bool)
        for r, idx in enumerate(rows):
            bits[r, idx] = True
        packed[s : s + chunk] = np.packbits(bits, axis=1)
    return packed.view(np.uint64)


def _expand(verts, vals, front_masks, vert_masks, vertex_values, keep_masks):
    """All (k+1)-simplices extending the dim-k frontier by a larger vertex."""
    nfront, nwords = front_masks.shape
    nverts = vert_masks.shape[0]
    last = verts[:, -1].astype(np.int64)
    vidx = np.arange(nverts, dtype=np.int64)
    out_v, out_val, out_m = [], [], []
    chunk = max(1, _CHUNK_ELEMS // max(1, nverts * nwords))
    for s in range(0, nfront, chunk):
        inter = front_masks[s : s + chunk, None, :] & vert_masks[None, :, :]
        nz = inter.any(axis=2)
        nz &= vidx[None, :] > last[s : s + chunk, None]
        rows, cols = np.nonzero(nz)
        if rows.size == 0:
            continue
        out_v.append(
            np.concatenate([verts[s + rows], cols[:, None].astype(np.int32)], axis=1)
        )
        out_val.append(np.maximum(vals[s + rows], vertex_values[cols]))
        if keep_masks:
            out_m.append(inter[rows, cols])
    k1 = verts.shape[1] + 1
    if not out_v:
        empty_m = np.empty((0, nwords), dtype=np.uint64)
        return np.empty((0, k1), dtype=np.int32), np.empty(0), empty_m
    new_m = np.concatenate(out_m) if keep_masks else np.empty((0, nwords), dtype=np.uint64)
    return np.concatenate(out_v), np.concatenate(out_val), new_m


def build_nerve(cover: DivisiveCover, max_dim: int = 3) -> FilteredComplex:
    """Filtered nerve of a divisive cover, truncated at ``max_dim``.

    One vertex per cover element (including the whole space and all
    intermediates) with value its covering radius; a simplex for every
    family of up to ``max_dim + 1`` elements sharing a point, with value
    the largest member radius.
    """
    if max_dim < 0:
        raise UsageError("max_dim must be >= 0")
    elements = cover.elements
    vertex_values = np.array([e.radius for e in elements], dtype=np.float64)
    vertex_ids = np.array([e.id for e in elements], dtype=np.int64)
    nverts = len(elements)

    simplices = [np.arange(nverts, dtype=np.int32)[:, None]]
    values = [vertex_values]
    if max_dim > 0 and nverts > 1:
        masks = _pack_bitsets([e.subset for e in elements], cover.space.n)
        fr_verts, fr_vals, fr_masks = simplices[0], vertex_values, masks
        for k in range(max_dim):
            fr_verts, fr_vals, fr_masks = _expand(
                fr_verts, fr_vals, fr_masks, masks, vertex_values, keep_masks=k + 1 < max_dim
            )
            if fr_verts.shape[0] == 0:
                break
            simplices.append(fr_verts)
            values.append(fr_vals)

    return FilteredComplex(vertex_values, simplices, values, max_dim, vertex_ids)

"""CSV ingestion and barcode export (CSV, JSON, SVG).

Output formats are fully deterministic: a fixed interval order, fixed
number formatting, no timestamps.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .metric import FiniteMetricSpace
from .persistence import Barcode

__all__ = [
    "ParseError",
    "ingest_csv",
    "write_barcode_csv",
    "write_barcode_json",
    "write_barcode_svg",
    "write_points_csv",
]


class ParseError(ValueError):
    """Input file problem, with the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def ingest_csv(path, metric: str = "l2", p: float | None = None) -> FiniteMetricSpace:
    """Read points from a CSV file: one point per line, constant dimension.

    Lines starting with '#' are treated as comments, blank lines are
    skipped.  Ragged rows, non-numeric or non-finite fields, and files
    with no data rows raise :class:`ParseError` with a line number.
    """
    rows: list[list[float]] = []
    dim: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            try:
                values = [float(f) for f in fields]
            except ValueError:
                raise ParseError(lineno, f"non-numeric field in {line!r}") from None
            if not all(math.isfinite(v) for v in values):
                raise ParseError(lineno, "non-finite value")
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise ParseError(lineno, f"expected {dim} fields, got {len(values)}")
            rows.append(values)
    if not rows:
        raise ParseError(1, "no data rows")
    return FiniteMetricSpace(np.array(rows), metric, p)


def _fmt(x: float) -> str:
    """12 significant digits; literal ``inf`` for infinite deaths."""
    if math.isinf(x):
        return "inf"
    return f"{x:.12g}"


def write_barcode_csv(barcode: Barcode, path) -> None:
    """``dim,birth,death`` rows sorted by (dim, birth, death)."""
    lines = ["dim,birth,death"]
    for dim, birth, death in sorted(barcode.intervals):
        lines.append(f"{dim},{_fmt(birth)},{_fmt(death)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_barcode_json(barcode: Barcode, meta: dict, path) -> None:
    """``{"meta": {...}, "intervals": [[dim, birth, death-or-null], ...]}``."""
    intervals = [
        [dim, birth, None if math.isinf(death) else death]
        for dim, birth, death in sorted(barcode.intervals)
    ]
    payload = {"meta": _plain(meta), "intervals": intervals}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _plain(obj):
    """Recursively convert numpy scalars/arrays for the json encoder."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def write_points_csv(space: FiniteMetricSpace, path) -> None:
    """Point coordinates, one row per point, at full precision."""
    lines = [f"# {space.n} points in R^{space.dim}"]
    for row in space.points:
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_barcode_svg(barcode: Barcode, path, title: str | None = None) -> None:
    """Static barcode plot: one horizontal band per dimension.

    Intervals are drawn as bars sorted by birth; infinite deaths run to
    the right margin and end in an arrowhead.
    """
    width, bar_h, gap, margin = 640.0, 6.0, 3.0, 40.0
    by_dim: dict[int, list[tuple[float, float]]] = {}
    for dim, birth, death in sorted(barcode.intervals):
        by_dim.setdefault(dim, []).append((birth, death))
    dims = sorted(by_dim)

    finite = [v for ivs in by_dim.values() for iv in ivs for v in iv if math.isfinite(v)]
    lo = min(finite, default=0.0)
    hi = max(finite, default=1.0)
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    lo -= 0.05 * span
    hi += 0.05 * span

    def x_of(value: float) -> float:
        return margin + (value - lo) / (hi - lo) * (width - 2 * margin)

    rows: list[str] = []
    y = margin
    for dim in dims:
        rows.append(
            f'<text x="8" y="{y + bar_h:.1f}" font-size="12" font-family="sans-serif">H{dim}</text>'
        )
        for birth, death in by_dim[dim]:
            x0 = x_of(birth)
            if math.isinf(death):
                x1 = width - margin
                ah = bar_h / 2.0
                rows.append(
                    f'<path d="M{x1:.2f},{y:.2f} L{x1 + 8:.2f},{y + ah:.2f} '
                    f'L{x1:.2f},{y + bar_h:.2f} Z" fill="#444"/>'
                )
            else:
                x1 = max(x_of(death), x0 + 0.5)
            rows.append(
                f'<rect x="{x0:.2f}" y="{y:.2f}" width="{x1 - x0:.2f}" '
                f'height="{bar_h:.2f}" fill="#3b6ea5"/>'
            )
            y += bar_h + gap
        y += 3 * gap
    height = y + margin

    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
    ]
    if title:
        head.append(
            f'<text x="{margin}" y="{margin / 2:.1f}" font-size="13" '
            f'font-family="sans-serif">{title}</text>'
        )
    axis_y = height - margin / 2
    head.append(
        f'<line x1="{margin}" y1="{axis_y:.1f}" x2="{width - margin}" y2="{axis_y:.1f}" '
        'stroke="#888" stroke-width="1"/>'
    )
    for frac in (0.0, 0.5, 1.0):
        v = lo + frac * (hi - lo)
        head.append(
            f'<text x="{x_of(v):.1f}" y="{axis_y + 14:.1f}" font-size="10" '
            f'font-family="sans-serif" text-anchor="middle">{v:.3g}</text>'
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(head + rows) + "\n</svg>\n")

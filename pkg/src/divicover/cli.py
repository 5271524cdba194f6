"""Command-line front-end.

Subcommands:
  run       divisive cover -> nerve -> barcode, with CSV/JSON/SVG export
  generate  emit a synthetic point cloud as CSV
  cech      brute-force reference barcode for small inputs
  verify    compare the pipeline against the reference (exit 1 on failure)

Exit codes: 0 success, 1 verification/pipeline failure, 2 usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import io as bio
from .cover import DivisionStrategy, divisive_cover
from .generators import generate_sphere, generate_torus
from .metric import FiniteMetricSpace, UsageError, diameter, relative_radius
from .nerve import build_nerve
from .oracle import cech_filtration, verify_interleaving
from .persistence import Barcode, compute_persistence

__all__ = ["RunConfig", "main", "run_pipeline"]


@dataclass
class RunConfig:
    """Everything one pipeline invocation depends on."""

    input: str | None = None
    generator: str | None = None
    metric: str = "l2"
    delta: float = 0.05
    resolution: str = "0.3r"  # absolute value, or fraction of r(X) with suffix 'r'
    division: str = "ellipsoid"
    max_dim: int = 3
    seed: int = 0
    normalize: str = "none"
    outputs: list[tuple[str, str]] = field(default_factory=list)


def _parse_metric(text: str) -> tuple[str, float | None]:
    if text in ("l2", "linf"):
        return text, None
    if text.startswith("lp:"):
        try:
            return "lp", float(text[3:])
        except ValueError:
            raise UsageError(f"bad lp exponent in {text!r}") from None
    raise UsageError(f"unknown metric {text!r}; expected l2, linf or lp:<p>")


def _load_space(config: RunConfig) -> FiniteMetricSpace:
    metric, p = _parse_metric(config.metric)
    if (config.input is None) == (config.generator is None):
        raise UsageError("exactly one of --input and --generator is required")
    if config.input is not None:
        return bio.ingest_csv(config.input, metric, p)
    name, _, arg = config.generator.partition(":")
    if name == "sphere":
        n = int(arg) if arg else 1000
        return generate_sphere(n=n, seed=config.seed, metric=metric)
    if name == "torus":
        k = int(arg) if arg else 20
        return generate_torus(k=k, seed=config.seed, metric=metric)
    raise UsageError(f"unknown generator {config.generator!r}; expected sphere[:n] or torus[:k]")


def _resolve_resolution(spec: str, space: FiniteMetricSpace) -> float:
    text = str(spec).strip()
    try:
        if text.endswith("r"):
            value = float(text[:-1]) * relative_radius(space)[0]
        else:
            value = float(text)
    except ValueError:
        raise UsageError(f"bad resolution {spec!r}; expected a number or '<frac>r'") from None
    if value < 0:
        raise UsageError("resolution must be >= 0")
    return value


def _normalization_constant(mode: str, space: FiniteMetricSpace) -> float:
    if mode == "none":
        return 1.0
    if mode == "diameter":
        return diameter(space)[0]
    if mode == "radius":
        return relative_radius(space)[0]
    raise UsageError(f"unknown normalization {mode!r}")


def _write_outputs(config: RunConfig, barcode: Barcode, meta: dict) -> None:
    for fmt, path in config.outputs:
        if fmt == "csv":
            bio.write_barcode_csv(barcode, path)
        elif fmt == "json":
            bio.write_barcode_json(barcode, meta, path)
        elif fmt == "svg":
            bio.write_barcode_svg(barcode, path)


def run_pipeline(config: RunConfig) -> tuple[Barcode, dict]:
    """Cover, nerve and barcode for one configuration.

    Returns the (possibly normalized) barcode plus an artifact dict with
    the cover, nerve, output metadata and per-stage wall times; writes
    any requested output files and prints a summary.
    """
    space = _load_space(config)
    resolution = _resolve_resolution(config.resolution, space)
    strategy = DivisionStrategy(config.division, config.delta)

    times: dict[str, float] = {}
    t0 = time.perf_counter()
    cover = divisive_cover(space, strategy, resolution)
    times["cover"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    nerve = build_nerve(cover, config.max_dim)
    times["nerve"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    barcode = compute_persistence(nerve)
    times["persistence"] = time.perf_counter() - t0

    constant = _normalization_constant(config.normalize, space)
    barcode.meta.update(delta=config.delta, resolution=resolution)
    if constant != 1.0:
        barcode = barcode.rescaled(constant)

    meta = {
        "delta": config.delta,
        "resolution": resolution,
        "metric": config.metric,
        "normalize": config.normalize,
        "seed": config.seed,
        "cover_size": len(cover),
        "nerve_sizes": list(nerve.sizes()),
    }
    _write_outputs(config, barcode, meta)

    counts = [0] * (config.max_dim + 1)
    for dim, _, _ in barcode.intervals:
        counts[dim] += 1
    print(f"space: n={space.n} d={space.dim} metric={config.metric}")
    print(f"cover: {len(cover)} elements ({len(cover.leaves)} leaves), resolution {resolution:.6g}")
    print(f"nerve: sizes per dim {list(nerve.sizes())}")
    print(f"barcode: intervals per dim {counts} (+{barcode.n_zero_length} zero-length dropped)")
    print(
        "wall times: "
        + ", ".join(f"{stage} {seconds:.3f}s" for stage, seconds in times.items())
    )
    return barcode, {"space": space, "cover": cover, "nerve": nerve, "meta": meta, "times": times}


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    outputs = []
    if getattr(args, "out_csv", None):
        outputs.append(("csv", args.out_csv))
    if getattr(args, "out_json", None):
        outputs.append(("json", args.out_json))
    if getattr(args, "out_svg", None):
        outputs.append(("svg", args.out_svg))
    return RunConfig(
        input=args.input,
        generator=args.generator,
        metric=args.metric,
        delta=args.delta,
        resolution=args.resolution,
        division=args.division,
        max_dim=args.max_dim,
        seed=args.seed,
        normalize=args.normalize,
        outputs=outputs,
    )


def _cmd_run(args: argparse.Namespace) -> int:
    run_pipeline(_config_from_args(args))
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if config.generator is None:
        raise UsageError("generate requires --generator")
    if not args.out_csv:
        raise UsageError("generate requires --out-csv")
    space = _load_space(config)
    bio.write_points_csv(space, args.out_csv)
    print(f"wrote {space.n} points in R^{space.dim} to {args.out_csv}")
    return 0


def _cmd_cech(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    space = _load_space(config)
    filtration = cech_filtration(space, config.max_dim, force=args.force)
    barcode = compute_persistence(filtration)
    constant = _normalization_constant(config.normalize, space)
    if constant != 1.0:
        barcode = barcode.rescaled(constant)
    meta = {
        "delta": None,
        "resolution": None,
        "metric": config.metric,
        "normalize": config.normalize,
        "seed": config.seed,
        "cover_size": space.n,
        "nerve_sizes": list(filtration.sizes()),
    }
    _write_outputs(config, barcode, meta)
    counts: dict[int, int] = {}
    for dim, _, _ in barcode.intervals:
        counts[dim] = counts.get(dim, 0) + 1
    print(f"reference filtration sizes {list(filtration.sizes())}, intervals {counts}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    space = _load_space(config)
    resolution = _resolve_resolution(config.resolution, space)
    strategy = DivisionStrategy(config.division, config.delta)
    report = verify_interleaving(
        space, strategy, resolution, max_dim=config.max_dim, force=args.force
    )
    text = json.dumps(report, indent=2)
    print(text)
    if args.out_json:
        with open(args.out_json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if report["pass"] else 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="CSV file of points, one per line")
    parser.add_argument(
        "--generator", help="synthetic cloud: sphere[:n] or torus[:k] (seeded by --seed)"
    )
    parser.add_argument("--metric", default="l2", help="l2, linf or lp:<p> (default l2)")
    parser.add_argument("--delta", type=float, default=0.05, help="division overlap parameter")
    parser.add_argument(
        "--resolution",
        default="0.3r",
        help="stop dividing below this covering radius; absolute number or fraction of r(X) like 0.3r",
    )
    parser.add_argument(
        "--division", default="ellipsoid", choices=["ellipsoid", "decision"], help="division strategy"
    )
    parser.add_argument("--max-dim", type=int, default=3, help="top simplex dimension (default 3)")
    parser.add_argument("--seed", type=int, default=0, help="generator seed")
    parser.add_argument(
        "--normalize",
        default="none",
        choices=["none", "diameter", "radius"],
        help="divide filtration values by the space diameter or radius",
    )
    parser.add_argument("--out-csv", help="write barcode (or points, for generate) as CSV")
    parser.add_argument("--out-json", help="write barcode plus metadata as JSON")
    parser.add_argument("--out-svg", help="write a barcode plot as SVG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divicover",
        description="Persistent homology of point clouds via divisive covers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="full pipeline: cover, nerve, barcode")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_gen = sub.add_parser("generate", help="write a synthetic point cloud as CSV")
    _add_common(p_gen)
    p_gen.set_defaults(func=_cmd_generate)

    p_cech = sub.add_parser("cech", help="brute-force reference barcode (small inputs)")
    _add_common(p_cech)
    p_cech.add_argument("--force", action="store_true", help="override the small-input guard")
    p_cech.set_defaults(func=_cmd_cech)

    p_verify = sub.add_parser("verify", help="check the pipeline against the brute-force reference")
    _add_common(p_verify)
    p_verify.add_argument("--force", action="store_true", help="override the small-input guard")
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if exc.code is not None else 0
        return 0 if code == 0 else 2
    try:
        return args.func(args)
    except (UsageError, bio.ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pipeline failure, not a usage problem
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

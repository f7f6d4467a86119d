"""Command-line interface.

Exit codes: 0 ok, 2 schema or invalid input, 3 dimension mismatch,
4 implication violation (a defect in the library, never expected).
"""

from __future__ import annotations

import argparse
import json
import sys

from .compactness import greedy_epsilon_net
from .convergence import (
    DEFAULT_RADII,
    DEFAULT_SPACING,
    ImplicationViolation,
    admissible_grid,
    gamma_residual_table,
    implication_report,
)
from .families import FamilyError, FamilySpec, generate_prefix, limit_of
from .fuzzy import RepresentationError, classify
from .geometry import INF, DimensionMismatch, GeometryConfig, hausdorff
from .io import SchemaError, family_from_dict, load_fuzzy, load_json
from .metrics import dp_metric, endograph_metric, sendograph_metric

EXIT_OK, EXIT_SCHEMA, EXIT_DIM, EXIT_IMPLICATION = 0, 2, 3, 4


def format_value(x: float) -> str:
    return "inf" if x == INF else f"{x:.12f}"


def _dist(args) -> int:
    if args.p is not None and args.metric != "dp":
        raise SchemaError("--p", "only meaningful with --metric dp")
    a, b = load_fuzzy(args.file_a), load_fuzzy(args.file_b)
    if a.dim != b.dim:
        raise DimensionMismatch(f"dim: {args.file_a} has {a.dim}, {args.file_b} has {b.dim}")
    if args.metric == "hausdorff":
        value = hausdorff(a.support, b.support)
    elif args.metric == "hend":
        value = endograph_metric(a, b)
    elif args.metric == "send":
        value = sendograph_metric(a, b)
    else:
        value = dp_metric(a, b, 1.0 if args.p is None else args.p)
    print(format_value(value))
    return EXIT_OK


def _classify(args) -> int:
    u = load_fuzzy(args.file)
    print(json.dumps(classify(u, GeometryConfig.for_spacing(args.spacing)).to_dict(),
                     sort_keys=True))
    return EXIT_OK


def _spec(source: str, seed: int | None, n_max: int | None) -> FamilySpec:
    doc = load_json(source, "spec")
    if not isinstance(doc, dict):
        raise SchemaError("spec", "expected a JSON object")
    if seed is not None:
        doc = {**doc, "seed": seed}
    if n_max is not None:
        doc = {**doc, "n_max": n_max}
    try:
        return FamilySpec.from_dict(doc)
    except TypeError as exc:
        raise SchemaError("spec", str(exc)) from None


def _radii(text: str) -> tuple:
    try:
        radii = tuple(float(r) for r in text.split(","))
    except ValueError:
        raise SchemaError("--radii", f"expected comma-separated numbers, got {text!r}") from None
    if not radii or any(not r > 0 for r in radii):
        raise SchemaError("--radii", "radii must be positive")
    return radii


def _analyze(args) -> int:
    spec = _spec(args.spec, args.seed, args.n_max)
    radii = _radii(args.radii)
    if args.alphas < 1:
        raise SchemaError("--alphas", "need at least one level")
    seq = generate_prefix(spec)
    u = limit_of(spec)
    grid = admissible_grid(u, [i / (args.alphas + 1) for i in range(1, args.alphas + 1)])
    table = gamma_residual_table(seq, u, grid, radii, args.p)
    with open(args.out, "w", newline="") as fh:
        table.to_csv(fh)
    try:
        report = implication_report(seq, u, grid, radii, args.p, spec.grid_spacing)
    except ImplicationViolation as exc:
        print(json.dumps(exc.report.to_dict(), sort_keys=True))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IMPLICATION
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK


def _net(args) -> int:
    if not args.eps > 0:
        raise SchemaError("--eps", "must be positive")
    doc = load_json(args.source, "source")
    if isinstance(doc, dict) and "members" in doc:
        members = family_from_dict(doc)
    else:
        members = generate_prefix(_spec(args.source, args.seed, args.n_max))
    print(greedy_epsilon_net(members, args.eps).to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzmet",
                                     description="Metrics and convergence diagnostics for step fuzzy sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance between two fuzzy set documents")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--metric", choices=("hausdorff", "hend", "send", "dp"), default="hend")
    p.add_argument("--p", type=float, default=None, help="exponent for --metric dp (default 1)")
    p.set_defaults(func=_dist)

    p = sub.add_parser("classify", help="class report for a fuzzy set document")
    p.add_argument("file")
    p.add_argument("--spacing", type=float, default=DEFAULT_SPACING,
                   help="sample spacing that sets the predicate tolerances")
    p.set_defaults(func=_classify)

    p = sub.add_parser("analyze", help="convergence analysis of a generated family")
    p.add_argument("spec", help="FamilySpec as inline JSON or a file path")
    p.add_argument("--n-max", type=int, default=None, help="override the spec's last index")
    p.add_argument("--alphas", type=int, default=16, help="number of interior levels i/(k+1)")
    p.add_argument("--radii", default=",".join(f"{r:g}" for r in DEFAULT_RADII))
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="residuals.csv", help="CSV path for the residual table")
    p.set_defaults(func=_analyze)

    p = sub.add_parser("net", help="greedy epsilon-net of a family under H_end")
    p.add_argument("source", help="family document or FamilySpec (inline JSON or path)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.set_defaults(func=_net)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, FamilyError, RepresentationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())

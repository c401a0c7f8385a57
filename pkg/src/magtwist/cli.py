"""Command-line interface.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input.
Graph and twist arguments accept a file path or ``fixture:<name>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from .graph import Graph
from .homology import magnitude_homology
from .io import (
    FIXTURES,
    InputError,
    dump_json,
    fixture_path,
    load_graph,
    load_twist,
    plot_csv,
    twist_from_json,
)
from .series import magnitude_function_samples
from .twist import TwistError, TwistSpec, build_twist_pair, validate_sycamore

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fixture_json(arg: str):
    name = arg.split(":", 1)[1]
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return json.loads(fixture_path(name).read_text())


def load_graph_arg(arg: str) -> Graph:
    """A graph file, or one glued graph of a fixture as ``fixture:<name>:X``."""
    if arg.startswith("fixture:"):
        parts = arg.split(":")
        if len(parts) != 3 or parts[2] not in ("X", "Y"):
            raise InputError("graph fixtures are written fixture:<name>:X or fixture:<name>:Y")
        spec = twist_from_json(_fixture_json(":".join(parts[:2])), parts[1])
        return build_twist_pair(spec).graph(parts[2])
    return load_graph(arg)


def load_twist_arg(arg: str) -> TwistSpec:
    if arg.startswith("fixture:"):
        return twist_from_json(_fixture_json(arg), arg)
    return load_twist(arg)


def cmd_magnitude(args) -> int:
    from .verify import magnitude_routes

    g = load_graph_arg(args.graph)
    routes = magnitude_routes(g, args.max_length)
    _emit(dump_json(routes.to_json()), args.out)
    return EXIT_OK if routes.agree else EXIT_FAIL


def cmd_homology(args) -> int:
    g = load_graph_arg(args.graph)
    mh = magnitude_homology(g, args.max_length)
    text = mh.to_tsv() if args.format == "tsv" else dump_json(mh.to_json())
    _emit(text, args.out)
    return EXIT_OK


def cmd_twist_build(args) -> int:
    from .io import graph_to_json

    spec = load_twist_arg(args.twist)
    pair = build_twist_pair(spec)
    rep = validate_sycamore(pair)
    out = {
        "X": graph_to_json(pair.X),
        "Y": graph_to_json(pair.Y),
        "classes": {v: c.value for v, c in pair.classes.items()},
        "sycamore": rep.to_json(),
    }
    _emit(dump_json(out), args.out)
    return EXIT_OK


def cmd_twist_verify(args) -> int:
    from .filtration import q_slice
    from .verify import verify_sycamore_magnitude

    spec = load_twist_arg(args.twist)
    report = verify_sycamore_magnitude(
        spec,
        order=args.max_length,
        evidence_length=args.evidence_length,
        bijection_length=args.bijection_length,
        homology_length=args.homology_length if args.emit_homology else None,
        workers=args.workers,
    )
    out = report.to_json()
    if args.dump_slice:
        owner, m, ell = args.dump_slice
        pair = build_twist_pair(spec)
        sl = q_slice(pair, owner, m, ell)
        out["slice"] = {"owner": owner, "m": m, **sl.to_json(pair.graph(owner))}
    _emit(dump_json(out), args.out)
    return report.exit_code()


def cmd_fuzz(args) -> int:
    from .fuzz import FuzzConfig, run_fuzz

    cfg = FuzzConfig(
        mode=args.mode,
        trials=args.trials,
        seed=args.seed,
        max_vertices=args.max_vertices,
        max_length=args.max_length,
        evidence_length=args.evidence_length,
        out=args.out_dir,
    )
    summary = run_fuzz(cfg)
    _emit(dump_json(summary.to_json()), args.out)
    return EXIT_FAIL if summary.failures else EXIT_OK


def cmd_plot(args) -> int:
    g = load_graph_arg(args.graph)
    ts = np.linspace(args.t_min, args.t_max, args.steps)
    _emit(plot_csv(ts, magnitude_function_samples(g, ts)), args.out)
    return EXIT_OK


def _slice_arg(text: str):
    try:
        owner, m, ell = text.split(":")
        if owner not in ("X", "Y"):
            raise ValueError
        return owner, int(m), int(ell)
    except ValueError:
        raise argparse.ArgumentTypeError("expected OWNER:M:ELL, e.g. X:2:4")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magtwist", description="Graph magnitude, magnitude homology and sycamore twists.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, length_default=10):
        sp.add_argument("--max-length", type=_nonneg, default=length_default, help="truncation order N")
        sp.add_argument("--out", help="write output here instead of stdout")

    sp = sub.add_parser("magnitude", help="magnitude series by three routes")
    sp.add_argument("graph")
    common(sp)
    sp.set_defaults(func=cmd_magnitude)

    sp = sub.add_parser("homology", help="magnitude homology table")
    sp.add_argument("graph")
    common(sp, 4)
    sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("twist-build", help="glue X and Y and classify vertices")
    sp.add_argument("twist")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_twist_build)

    sp = sub.add_parser("twist-verify", help="compare magnitudes and check every proof step")
    sp.add_argument("twist")
    common(sp)
    sp.add_argument("--evidence-length", type=_nonneg, default=6, help="largest length for Q/E/homotopy evidence")
    sp.add_argument("--bijection-length", type=_nonneg, default=6, help="largest length for the T bijection check")
    sp.add_argument("--emit-homology", action="store_true", help="add MH tables of X and Y")
    sp.add_argument("--homology-length", type=_nonneg, default=4, help="largest length for --emit-homology")
    sp.add_argument("--dump-slice", type=_slice_arg, metavar="OWNER:M:ELL", help="include one Q_m slice")
    sp.add_argument("--workers", type=int, default=1, help="processes for the evidence jobs")
    sp.set_defaults(func=cmd_twist_verify)

    sp = sub.add_parser("fuzz", help="seeded random instances")
    sp.add_argument("--mode", choices=("random-graphs", "random-sycamore", "random-whitney-nonadjacent"), required=True)
    sp.add_argument("--trials", type=_nonneg, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-vertices", type=int, default=6)
    sp.add_argument("--evidence-length", type=_nonneg, default=4)
    sp.add_argument("--out-dir", help="directory for reproducer files")
    common(sp, 6)
    sp.set_defaults(func=cmd_fuzz)

    sp = sub.add_parser("plot", help="magnitude function samples as CSV")
    sp.add_argument("graph")
    sp.add_argument("--t-min", type=float, default=0.1)
    sp.add_argument("--t-max", type=float, default=5.0)
    sp.add_argument("--steps", type=int, default=50)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_plot)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "plot":
        if args.t_min <= 0 or args.t_max < args.t_min:
            parser.error("need 0 < t-min <= t-max")
        if args.steps < 2:
            parser.error("--steps must be at least 2")
    if args.command == "fuzz" and args.max_vertices < 1:
        parser.error("--max-vertices must be at least 1")
    try:
        return args.func(args)
    except (InputError, TwistError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""``postulatum`` command line: construct, verify, analyze."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import kgraph
from .construct import PROGRAMS, run_program
from .errors import GeometryError, KindMismatch, SceneFormatError, UnresolvedReference
from .scenes import parse_scene
from .svg import RenderStyle, render_svg
from .verifier import PROPOSITIONS, TrialConfig, run_trials

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "POSTULATUM_SEED"


def _complain(msg: str) -> None:
    print(f"postulatum: {msg}", file=sys.stderr)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def cmd_construct(args) -> int:
    try:
        scene = parse_scene(Path(args.scene).read_text(encoding="utf-8"))
        trace = run_program(PROGRAMS[args.program](), scene)
    except OSError as exc:
        _complain(f"cannot read scene: {exc.strerror}: {args.scene}")
        return EXIT_USAGE
    except SceneFormatError as exc:
        _complain(f"{args.scene}: {exc}")
        return EXIT_USAGE
    except (KindMismatch, UnresolvedReference) as exc:
        _complain(f"{args.scene}: {exc}")
        return EXIT_USAGE
    text = trace.to_text()
    try:
        if args.trace:
            _write(args.trace, text)
        else:
            sys.stdout.write(text)
        if args.svg:
            _write(args.svg, render_svg(trace, RenderStyle(size=args.size, labels=not args.no_labels)))
    except OSError as exc:
        _complain(f"cannot write output: {exc.strerror}: {exc.filename}")
        return EXIT_USAGE
    if not trace.ok:
        _complain(f"{args.program}: {type(trace.failure).__name__}: {trace.failure}")
        return EXIT_FAIL
    return EXIT_OK


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return 0 if raw is None or not raw.strip() else int(raw)


def cmd_verify(args) -> int:
    if args.prop not in PROPOSITIONS:
        _complain(f"unknown proposition {args.prop!r}; choose from {', '.join(PROPOSITIONS)}")
        return EXIT_USAGE
    try:
        seed = _default_seed() if args.seed is None else args.seed
        cfg = TrialConfig(args.prop, args.trials, seed, args.tol)
    except ValueError as exc:
        _complain(str(exc))
        return EXIT_USAGE
    report = run_trials(cfg)
    sys.stdout.write(report.to_text())
    if args.figure:
        from .plotting import plot_margins  # matplotlib is only needed here

        try:
            plot_margins(report, args.figure)
        except (OSError, ValueError) as exc:
            _complain(f"cannot write figure: {exc}")
            return EXIT_USAGE
    return EXIT_OK if report.passed else EXIT_FAIL


def _read_graph(source: str) -> str:
    path = Path(source)
    if not path.exists() and source in kgraph.DATASETS:
        return kgraph.dataset_text(source)
    return path.read_text(encoding="utf-8")


def cmd_analyze(args) -> int:
    try:
        graph = kgraph.parse_graph(_read_graph(args.graph))
    except OSError as exc:
        _complain(f"cannot read graph: {exc.strerror}: {args.graph}")
        return EXIT_USAGE
    except kgraph.ParseError as exc:
        _complain(f"{args.graph}: {exc}")
        return EXIT_USAGE
    result = kgraph.analyze(graph)
    sys.stdout.write(result.to_text())
    failed = bool(result.violations)
    if args.strict and result.unused:
        print(f"unused-properties: {', '.join(result.unused)}")
        failed = True
    return EXIT_FAIL if failed else EXIT_OK


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="postulatum",
                                     description="Constructions, checks and dependency analysis "
                                                 "for parallel-postulate geometry.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="run a construction program on a scene file")
    p.add_argument("--program", required=True, choices=sorted(PROGRAMS))
    p.add_argument("--scene", required=True, help="scene file")
    p.add_argument("--svg", help="write an SVG figure of the trace")
    p.add_argument("--trace", help="write the trace here instead of stdout")
    p.add_argument("--size", type=int, default=RenderStyle.size, help="SVG canvas size in px")
    p.add_argument("--no-labels", action="store_true", help="omit point labels in the SVG")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="run seeded trials of a proposition")
    p.add_argument("--prop", required=True, help=f"one of: {', '.join(PROPOSITIONS)}")
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=_u64, default=None, help=f"defaults to ${SEED_ENV}, else 0")
    p.add_argument("--tol", type=float, default=None, help="override the proposition's tolerance")
    p.add_argument("--figure", help="write a margin plot (png, svg or pdf)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="check a dependency graph against the K-rules")
    p.add_argument("--graph", required=True, help=f"a .kg file or one of: {', '.join(kgraph.DATASETS)}")
    p.add_argument("--strict", action="store_true", help="also fail on unused property declarations")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GeometryError as exc:
        _complain(f"{type(exc).__name__}: {exc}")
        return EXIT_FAIL
    except ValueError as exc:  # e.g. --size below the minimum canvas
        _complain(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

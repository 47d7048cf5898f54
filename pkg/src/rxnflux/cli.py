"""Command-line driver: reproducible simulate and flux-analysis pipelines.

``rxnflux simulate`` runs seeded simulations of a model file and writes
trace (plus optional species-count CSV) artifacts; ``rxnflux flux`` turns
a model + trace pair into causal-flux reports.  Every run writes a
``manifest.json`` recording the invocation, and (model, seed, flags)
determine every output byte.  Outputs are computed fully before anything
is written, so a failing run leaves no partial artifacts.

Exit codes: 0 success; 1 model/trace parse or match error; 2 usage or
I/O error; 3 causality violation in the input trace.
"""

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .causality import extract_configuration, restrict_interval
from .errors import CausalityViolationError, ParseError, TraceError
from .flux import (
    flux_configuration,
    flux_to_json,
    net_flux,
    reaction_fire_counts,
    threshold_filter,
)
from .model import parse_model
from .report import emit_dot, render_report
from .simulate import counts_csv, simulate
from .traceio import parse_trace, serialize_trace


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="rxnflux",
        description="Stochastic reaction-network simulation and causal flux analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run seeded simulations of a model")
    sim.add_argument("--model", required=True, help="reaction model file")
    sim.add_argument(
        "--seed",
        action="append",
        type=int,
        required=True,
        help="RNG seed; repeat for independent runs (written to per-seed dirs)",
    )
    sim.add_argument("--t-end", type=float, help="stop at simulated time")
    sim.add_argument("--max-steps", type=int, help="stop after this many firings")
    sim.add_argument(
        "--sample-every",
        type=float,
        help="also write counts.csv sampled on this time grid",
    )
    sim.add_argument("--out-dir", required=True, help="directory for outputs")

    flux = sub.add_parser("flux", help="extract causal flux from a trace")
    flux.add_argument("--model", required=True, help="reaction model file")
    flux.add_argument("--trace", required=True, help="trace file to analyze")
    flux.add_argument(
        "--interval",
        action="append",
        metavar="LO:HI",
        help="restrict to edges targeting (LO, HI]; repeatable",
    )
    flux.add_argument(
        "--threshold",
        nargs="?",
        const=0.1,
        type=float,
        help="drop triples below FRACTION x mean weight (default 0.1)",
        metavar="FRACTION",
    )
    flux.add_argument(
        "--net",
        action="store_true",
        help="collapse opposite-direction pairs to their difference",
    )
    flux.add_argument(
        "--exclude-init",
        action="store_true",
        help="drop init-sourced triples (and exclude them from the mean)",
    )
    flux.add_argument("--out-dir", required=True, help="directory for outputs")
    return parser


def _write_all(out_dir: Path, files):
    out_dir.mkdir(parents=True, exist_ok=True)
    for relpath, text in files:
        path = out_dir / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _manifest(payload) -> str:
    payload = dict(payload, version=__version__)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_simulate(args) -> int:
    if args.t_end is None and args.max_steps is None:
        raise _UsageError("one of --t-end or --max-steps is required")
    if args.max_steps is not None and args.max_steps < 1:
        raise _UsageError("--max-steps must be at least 1")
    if args.sample_every is not None and not args.sample_every > 0:
        raise _UsageError("--sample-every must be positive")
    model = parse_model(Path(args.model).read_text())

    files = []
    for seed in args.seed:
        prefix = Path(f"seed-{seed}") if len(args.seed) > 1 else Path()
        trajectory = simulate(
            model, t_end=args.t_end, max_steps=args.max_steps, seed=seed
        )
        files.append((prefix / "run.trace", serialize_trace(trajectory)))
        if args.sample_every is not None:
            grid = []
            k = 0
            while k * args.sample_every <= trajectory.horizon:
                grid.append(k * args.sample_every)
                k += 1
            files.append((prefix / "counts.csv", counts_csv(trajectory, grid)))
    outputs = [str(path) for path, _ in files]

    files.append(
        (
            Path("manifest.json"),
            _manifest(
                {
                    "command": "simulate",
                    "model": args.model,
                    "seeds": args.seed,
                    "t_end": args.t_end,
                    "max_steps": args.max_steps,
                    "sample_every": args.sample_every,
                    "outputs": outputs,
                }
            ),
        )
    )
    _write_all(Path(args.out_dir), files)
    return 0


def _parse_interval(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise _UsageError(f"--interval expects LO:HI, got {text!r}")
    try:
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise _UsageError(f"--interval expects numbers, got {text!r}") from None
    if not lo < hi:
        raise _UsageError(f"--interval needs LO < HI, got {text!r}")
    return lo, hi


def cmd_flux(args) -> int:
    if args.threshold is not None and args.threshold < 0:
        raise _UsageError("--threshold must be non-negative")
    model = parse_model(Path(args.model).read_text())
    trajectory = parse_trace(Path(args.trace).read_text(), model)
    config = extract_configuration(trajectory)
    intervals = [_parse_interval(text) for text in args.interval or []]

    files = []
    outputs = []
    for interval in intervals or [None]:
        if interval is None:
            suffix = ""
            part = config
        else:
            lo, hi = interval
            suffix = f"-{lo:g}-{hi:g}"
            part = restrict_interval(config, lo, hi)
        fx = flux_configuration(part)
        if args.threshold is not None or args.exclude_init:
            fx = threshold_filter(
                fx, args.threshold or 0.0, exclude_init=args.exclude_init
            )
        if args.net:
            fx = net_flux(fx)
        counts = reaction_fire_counts(trajectory, interval)
        for name, text in (
            (f"report{suffix}.txt", render_report(counts, fx, model)),
            (f"flux{suffix}.json", flux_to_json(fx)),
            (f"flux{suffix}.dot", emit_dot(fx)),
        ):
            files.append((Path(name), text))
            outputs.append(name)

    files.append(
        (
            Path("manifest.json"),
            _manifest(
                {
                    "command": "flux",
                    "model": args.model,
                    "trace": args.trace,
                    "intervals": [list(iv) for iv in intervals],
                    "threshold": args.threshold,
                    "net": args.net,
                    "exclude_init": args.exclude_init,
                    "outputs": outputs,
                }
            ),
        )
    )
    _write_all(Path(args.out_dir), files)
    return 0


class _UsageError(Exception):
    pass


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        return cmd_flux(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CausalityViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, TraceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

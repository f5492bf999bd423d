"""Command line interface.

Subcommands: ``run`` executes a configured batch and writes reports,
``validate`` checks a configuration without running anything, and
``gen-demos`` writes synthetic demonstration CSV files. Exit codes: 0 on
success, 1 on validation failure, 2 on runtime failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ..errors import CgdaError, ConfigError
from .batch import run_batch
from .config import load_config, validate_config
from .demos import generate_wax_demos, write_demonstration_csv
from .reports import emit_reports

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgda",
        description="Run goal-directed action experiments on the simulated arm.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a batch experiment from a config file")
    run.add_argument("config", type=Path, help="YAML configuration file")
    run.add_argument("--out", type=Path, required=True, help="output directory")
    run.add_argument("--seed", type=int, default=None, help="override base_seed")
    run.add_argument("--repetitions", type=int, default=None,
                     help="override repetitions")
    run.add_argument("--jobs", type=int, default=1,
                     help="parallel worker processes (default 1)")
    run.add_argument("--no-plots", action="store_true",
                     help="skip figure rendering")

    validate = sub.add_parser("validate", help="validate a config file")
    validate.add_argument("config", type=Path, help="YAML configuration file")

    gen = sub.add_parser("gen-demos", help="generate synthetic demonstrations")
    gen.add_argument("action", choices=["wax"], help="demonstration family")
    gen.add_argument("--diameter", type=float, default=0.30,
                     help="circle diameter in meters (default 0.30)")
    gen.add_argument("--count", type=int, default=5,
                     help="number of demonstrations (default 5)")
    gen.add_argument("--noise", type=float, default=0.005,
                     help="feature noise sigma in meters (default 0.005)")
    gen.add_argument("--duration", type=float, default=8.0,
                     help="demo duration in seconds (default 8.0)")
    gen.add_argument("--samples", type=int, default=120,
                     help="samples per demonstration (default 120)")
    gen.add_argument("--revolutions", type=float, default=1.0,
                     help="circle revolutions (default 1.0)")
    gen.add_argument("--seed", type=int, default=0, help="generator seed")
    gen.add_argument("--out", type=Path, required=True, help="output directory")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config["base_seed"] = args.seed
        if args.repetitions is not None:
            config["repetitions"] = args.repetitions
        config = validate_config(config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        report = run_batch(config, jobs=args.jobs)
        paths = emit_reports(report, args.out, plots=not args.no_plots)
    except (CgdaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for cell in report.cells:
        painted = (f"  painted%={cell.mean_painted_percent:.2f}"
                   if cell.mean_painted_percent is not None else "")
        disc = (f"{cell.mean_discrepancy:.4f}"
                if cell.mean_discrepancy is not None else "n/a")
        print(f"{cell.label}: mean_evals={cell.mean_evaluations:.1f} "
              f"mean_discrepancy={disc} invalid={cell.invalid_count}{painted}")
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"{args.config}: OK")
    return EXIT_OK


def _cmd_gen_demos(args: argparse.Namespace) -> int:
    try:
        demos = generate_wax_demos(
            args.diameter, args.count, args.noise, args.duration,
            samples=args.samples, revolutions=args.revolutions,
            rng=np.random.default_rng(args.seed),
        )
        args.out.mkdir(parents=True, exist_ok=True)
        for i, demo in enumerate(demos):
            path = args.out / f"demo_{i:02d}.csv"
            write_demonstration_csv(demo, path)
            print(f"wrote {path}")
    except (CgdaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "validate":
        return _cmd_validate(args)
    return _cmd_gen_demos(args)


if __name__ == "__main__":
    sys.exit(main())

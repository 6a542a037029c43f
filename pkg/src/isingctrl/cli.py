"""Command-line entry point.

Subcommands
-----------
verify-kernel : check the exact gap-pair kernel against the lattice oracle
evaluate      : exact value sweep for the stripe-stripe families + crossing
simulate      : Monte Carlo replication protocol with hitting-time tables
moments       : exact hitting-time moments and discount-limit diagnostics
render        : snapshot series of single episodes (PGM files)

All subcommands take a JSON configuration file (ExperimentConfig fields in
snake_case). Exit codes: 0 success, 2 verification mismatch, 3 unresolved
trajectories, 4 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, UnresolvedTrajectoryError
from .experiments import (
    ExperimentConfig,
    run_evaluate,
    run_moments,
    run_render,
    run_simulate,
    run_verify_kernel,
)

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_UNRESOLVED = 3
EXIT_CONFIG = 4


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isingctrl",
        description="Exact analysis and simulation of steered lattice cluster growth.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify-kernel", "verify the exact transition kernel against the lattice"),
        ("evaluate", "exact discounted value sweep and crossing estimate"),
        ("simulate", "Monte Carlo replication protocol"),
        ("moments", "exact hitting-time moments"),
        ("render", "episode snapshots as PGM images"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="JSON experiment configuration file")
        cmd.add_argument(
            "--output-dir", default=None, help="override the config's output directory"
        )
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = ExperimentConfig.from_json(args.config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.output_dir or config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "verify-kernel":
            ok = run_verify_kernel(config, out_dir)
            print("kernel verification:", "all rows match" if ok else "MISMATCH")
            return EXIT_OK if ok else EXIT_MISMATCH
        if args.command == "evaluate":
            run_evaluate(config, out_dir)
        elif args.command == "simulate":
            run_simulate(config, out_dir)
        elif args.command == "moments":
            run_moments(config, out_dir)
        elif args.command == "render":
            run_render(config, out_dir)
    except UnresolvedTrajectoryError as exc:
        print(f"unresolved trajectory: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"wrote outputs to {out_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

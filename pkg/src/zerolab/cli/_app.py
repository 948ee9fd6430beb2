from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import TYPE_CHECKING

from zerolab._exceptions import ConfigError

from ._errors import exit_on_error
from ._manifest import RunManifest, run_config
from ._plots import PLOT_KINDS, emit_plot_data
from ._report import emit_report

if TYPE_CHECKING:
    from collections.abc import Sequence

__all__ = ["build_parser", "main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerolab",
        description="Zero statistics of Gaussian random sections over CP^m.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="more logging (repeatable)"
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the experiments of a config file")
    run.add_argument("config", type=Path, help="JSON or TOML experiment file")
    run.add_argument(
        "--threads", type=int, help="worker threads (default: ZEROLAB_NUM_THREADS)"
    )
    run.add_argument("--seed", type=int, help="override the master seed")
    run.add_argument("-o", "--output-dir", type=Path, help="override output_dir")

    report = sub.add_parser("report", help="summarize a finished run")
    report.add_argument("manifest", type=Path, help="manifest.json or its directory")
    report.add_argument("--csv", type=Path, help="also write all summaries here")
    report.add_argument("--color", action="store_true", help="highlight JSON blocks")

    plot = sub.add_parser("plot", help="write plot-ready data files")
    plot.add_argument("manifest", type=Path, help="manifest.json or its directory")
    plot.add_argument("--kind", required=True, choices=PLOT_KINDS)
    plot.add_argument("--trial", type=int, default=0, help="trial for scatter-zeros")
    plot.add_argument("--svg", action="store_true", help="also render SVG figures")
    plot.add_argument("-o", "--output-dir", type=Path, help="default: <run>/plots")
    return parser


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    else:
        level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


def _load_manifest(path: Path) -> RunManifest:
    target = path / "manifest.json" if path.is_dir() else path
    if not target.exists():
        raise ConfigError("manifest", f"no manifest at {target}")
    return RunManifest.from_file(target)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``zerolab`` command; returns the exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    with exit_on_error() as ctx:
        if args.command == "run":
            manifest = run_config(
                args.config,
                threads=args.threads,
                seed=args.seed,
                output_dir=args.output_dir,
            )
            print(manifest.root / "manifest.json")
        elif args.command == "report":
            manifest = _load_manifest(args.manifest)
            print(emit_report(manifest, color=args.color, csv_path=args.csv))
        else:
            manifest = _load_manifest(args.manifest)
            paths = emit_plot_data(
                manifest,
                args.kind,
                trial=args.trial,
                svg=args.svg,
                output_dir=args.output_dir,
            )
            for path in paths:
                print(path)
    return ctx.exit_code

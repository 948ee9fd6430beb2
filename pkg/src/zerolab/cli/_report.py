"""Plain-text report of a finished run."""

from __future__ import annotations

import csv
import json
import math
from typing import TYPE_CHECKING, Any

from zerolab.utils import highlight_text

from ._manifest import write_summary

if TYPE_CHECKING:
    from pathlib import Path

    from ._manifest import ExperimentOutputs, RunManifest

__all__ = ["emit_report", "format_table"]

NO_EXPERIMENTS = "no experiments in this manifest"

REPORT_COLUMNS: dict[str, tuple[str, ...]] = {
    "hole": (
        "N",
        "trials",
        "hits",
        "p_hat",
        "ci_low",
        "ci_high",
        "neg_log_rate",
        "lower_bound",
    ),
    "zero-count": (
        "N",
        "delta",
        "trials",
        "p_hat",
        "ci_low",
        "ci_high",
        "mean",
        "expected",
    ),
    "max-modulus": ("N", "delta", "trials", "p_hat", "ci_low", "ci_high", "median"),
    "l1-log": ("N", "delta", "trials", "p_hat", "ci_high", "mean", "predicted"),
    "kernel-suite": (
        "N",
        "points",
        "row_sum_max",
        "min_eigenvalue",
        "whitening_max_sigma",
        "linf_violations",
        "near_deviation",
        "far_scaled_max",
        "basis_sum_error",
    ),
    "pl-check": ("N", "trials", "max_error", "tolerance", "constant_error"),
}


def _cell(value: str) -> str:
    try:
        x = float(value)
    except ValueError:
        return value
    if value.lstrip("-").isdigit() or not math.isfinite(x):
        return value
    return f"{x:.6g}"


def format_table(rows: list[dict[str, str]], columns: tuple[str, ...]) -> str:
    """Right-aligned fixed-width table of the given columns."""
    columns = tuple(c for c in columns if any(r.get(c) for r in rows)) or columns
    cells = [[_cell(r.get(c, "")) for c in columns] for r in rows]
    widths = [
        max([len(c), *(len(row[i]) for row in cells)]) for i, c in enumerate(columns)
    ]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells)
    return "\n".join(lines)


def _read_rows(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _fit_section(fits: dict[str, Any], color: bool) -> list[str]:
    lines = []
    for label, fit in fits.items():
        lin = fit["linear"]
        lines.append(
            f"rate fit [{label}]: -log p = {fit['slope']:.6g} N^{fit['exponent']} "
            f"+ {fit['intercept']:.6g}, R^2 = {fit['r_squared']:.4f}"
        )
        lines.append(
            f"  exponent 1 fit: slope {lin['slope']:.6g}, R^2 = "
            f"{lin['r_squared']:.4f}; R^2 gap {fit['r_squared_gap']:+.4f}"
        )
    text = json.dumps(fits, indent=2)
    lines.append(highlight_text(text, "json") if color else text)
    return lines


def _experiment_section(
    manifest: RunManifest, exp: ExperimentOutputs, color: bool
) -> tuple[list[str], list[dict[str, str]]]:
    lines = [f"== {exp.name} ({exp.kind}, m={exp.m}) =="]
    lines.append(f"trials: {exp.trials}, flagged: {exp.flagged}")
    summary = manifest.path_of(exp.summary)
    if not summary.exists():
        lines.append(f"missing output: {summary}")
        return lines, []
    rows = _read_rows(summary)
    if not rows:
        lines.append("no summary rows")
        return lines, rows
    if exp.kind == "hole":
        lines.append(f"neg_log_rate = -log p_hat / N^{exp.m + 1}")
    elif exp.kind == "max-modulus":
        lines.append("M_N is a refined grid estimate of the supremum, not a bound")
    lines.append(format_table(rows, REPORT_COLUMNS.get(exp.kind, tuple(rows[0]))))
    if exp.rate_fits:
        fits_path = manifest.path_of(exp.rate_fits)
        if fits_path.exists():
            lines.extend(_fit_section(json.loads(fits_path.read_text()), color))
        else:
            lines.append(f"missing output: {fits_path}")
    for name, ok in exp.checks.items():
        lines.append(f"check {name}: {'PASS' if ok else 'FAIL'}")
    return lines, rows


def emit_report(
    manifest: RunManifest, *, color: bool = False, csv_path: str | Path | None = None
) -> str:
    """Human-readable report of every experiment in `manifest`.

    Shows the per-N summary table, rate fits for both exponents with their
    R^2 gap and the pass/fail state of each check.  With `csv_path` the
    summaries of all experiments are also written to one CSV file.
    """
    if not manifest.experiments:
        return NO_EXPERIMENTS
    sections = [
        f"config {manifest.config_hash[:12]}  seed {manifest.master_seed}  "
        f"zerolab {manifest.version}"
    ]
    combined: list[dict[str, str]] = []
    for exp in manifest.experiments:
        lines, rows = _experiment_section(manifest, exp, color)
        sections.append("\n".join(lines))
        combined.extend(rows)
    if csv_path is not None:
        write_summary(combined, csv_path)
    return "\n\n".join(sections)

"""Plot-ready CSV files (and optional SVG figures) from a finished run."""

from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from pathlib import Path
from typing import TYPE_CHECKING, Literal, get_args

import numpy as np

from zerolab.deviations import read_records
from zerolab.ensemble import EnsembleSpec, sample_section
from zerolab.kernel import decay_profile
from zerolab.zeros import find_roots

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from typing_extensions import TypeAlias

    from zerolab.ensemble import PolySection

    from ._manifest import ExperimentOutputs, RunManifest

__all__ = ["PLOT_KINDS", "PlotKind", "emit_plot_data", "write_zero_scatter"]

logger = logging.getLogger(__name__)

PlotKind: TypeAlias = Literal["histogram", "rate", "kernel-decay", "scatter-zeros"]
PLOT_KINDS: tuple[str, ...] = get_args(PlotKind)
HISTOGRAM_BINS = 40
DECAY_SAMPLES = 201

_HISTOGRAM_STATISTIC = {
    "zero-count": ("fraction", lambda r: r.fraction),
    "max-modulus": ("log_max_over_N", lambda r: r.log_max / r.N),
    "l1-log": ("abs_log", lambda r: r.abs_log),
}


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    logger.info("wrote %s", path)
    return path


def _histograms(manifest: RunManifest, out: Path) -> list[Path]:
    paths = []
    for exp in manifest.experiments:
        if exp.kind not in _HISTOGRAM_STATISTIC:
            continue
        name, stat = _HISTOGRAM_STATISTIC[exp.kind]
        values: dict[int, list[float]] = defaultdict(list)
        for rec in read_records(manifest.path_of(exp.records)):
            if rec.ok:
                values[rec.N].append(stat(rec))
        rows = []
        for N, vals in sorted(values.items()):
            counts, edges = np.histogram(vals, bins=HISTOGRAM_BINS)
            rows.extend(
                (N, lo, hi, int(c)) for lo, hi, c in zip(edges[:-1], edges[1:], counts)
            )
        path = out / f"{exp.name}-histogram.csv"
        header = ("N", f"{name}_low", f"{name}_high", "count")
        paths.append(_write_csv(path, header, rows))
    return paths


def _rates(manifest: RunManifest, out: Path) -> list[Path]:
    paths = []
    for exp in manifest.experiments:
        summary = manifest.path_of(exp.summary)
        if exp.kind not in ("hole", "zero-count") or not summary.exists():
            continue
        with open(summary, newline="") as fh:
            rows = list(csv.DictReader(fh))
        data = []
        for row in rows:
            N, p = int(row["N"]), float(row["p_hat"])
            neg_log = -math.log(p) if p > 0 else math.inf
            x = N ** (exp.m + 1)
            data.append(
                (row.get("delta", ""), N, x, neg_log, p, row["ci_low"], row["ci_high"])
            )
        header = (
            "delta", "N", f"N^{exp.m + 1}", "neg_log_p", "p_hat", "ci_low", "ci_high"
        )
        paths.append(_write_csv(out / f"{exp.name}-rate.csv", header, data))
    return paths


def _decay_degrees(experiments: Sequence[ExperimentOutputs]) -> list[int]:
    kernel = [e for e in experiments if e.kind == "kernel-suite"] or experiments
    return sorted({N for e in kernel for N in e.degrees})


def _kernel_decay(manifest: RunManifest, out: Path) -> list[Path]:
    d = np.linspace(0.0, math.pi / 2, DECAY_SAMPLES)
    paths = []
    for N in _decay_degrees(manifest.experiments):
        rows = decay_profile(N, d).tolist()
        path = out / f"kernel-decay-N{N}.csv"
        paths.append(_write_csv(path, ("d", "P_N", "gaussian"), rows))
    return paths


def write_zero_scatter(s: PolySection, path: str | Path) -> Path:
    """Write the finite zeros of a section on CP^1 as ``re, im`` rows.

    Zeros at infinity have no chart-0 coordinate and are reported in the log.
    """
    roots = find_roots(s)
    if roots.at_infinity:
        logger.info("%d zero(s) at infinity not plotted", roots.at_infinity)
    rows = [(z.real, z.imag) for z in roots.roots]
    return _write_csv(Path(path), ("re", "im"), rows)


def _scatter(manifest: RunManifest, out: Path, trial: int) -> list[Path]:
    paths = []
    for exp in manifest.experiments:
        if exp.m != 1:
            continue
        for N in exp.degrees:
            s = sample_section(EnsembleSpec(1, N, manifest.master_seed), trial)
            path = out / f"{exp.name}-zeros-N{N}-trial{trial}.csv"
            paths.append(write_zero_scatter(s, path))
    return paths


def emit_plot_data(
    manifest: RunManifest,
    kind: str,
    *,
    trial: int = 0,
    svg: bool = False,
    output_dir: str | Path | None = None,
) -> list[Path]:
    """Write the data files of one plot kind and return their paths.

    - ``histogram``: count/N (or the statistic of the experiment) per N.
    - ``rate``: ``(N^{m+1}, -log p_hat)`` series of hole and zero-count runs.
    - ``kernel-decay``: ``(d, P_N, exp(-N d^2 / 2))`` per degree.
    - ``scatter-zeros``: finite zeros of trial `trial`.

    With `svg` a figure is rendered next to every CSV file (needs the
    ``plot`` extra).

    Raises
    ------
    ValueError
        If `kind` is unknown.
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")
    out = Path(output_dir) if output_dir is not None else manifest.root / "plots"
    out.mkdir(parents=True, exist_ok=True)
    if kind == "histogram":
        paths = _histograms(manifest, out)
    elif kind == "rate":
        paths = _rates(manifest, out)
    elif kind == "kernel-decay":
        paths = _kernel_decay(manifest, out)
    else:
        paths = _scatter(manifest, out, trial)
    if svg:
        from ._svg import render_svg

        paths += [render_svg(p, kind) for p in list(paths)]
    return paths


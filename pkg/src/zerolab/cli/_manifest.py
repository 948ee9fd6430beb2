"""Running a configuration file and recording what was produced."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Any

from zerolab.deviations import load_config, run_experiment

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

    from zerolab.deviations import ExperimentResult, RunConfig

__all__ = ["ExperimentOutputs", "RunManifest", "run_config", "write_summary"]

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
CONFIG_NAME = "config.json"


def _version() -> str:
    from zerolab import __version__

    return __version__


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class ExperimentOutputs:
    """Files and verdicts of one experiment; paths are relative to the manifest."""

    name: str
    kind: str
    m: int
    degrees: tuple[int, ...]
    records: str
    summary: str
    rate_fits: str | None = None
    trials: int = 0
    flagged: int = 0
    checks: dict[str, bool] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ExperimentOutputs:
        return cls(**{**data, "degrees": tuple(data["degrees"])})


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to find, check and reproduce the outputs of a run.

    Re-running `config` (also written next to the manifest as
    ``config.json``) reproduces every statistic bit for bit; only wall
    times and timestamps differ.
    """

    config_hash: str
    version: str
    master_seed: int
    started: str
    finished: str
    config: dict[str, Any]
    experiments: tuple[ExperimentOutputs, ...] = ()
    root: Path = field(default=Path(), compare=False)

    def path_of(self, relative: str) -> Path:
        return self.root / relative

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out.pop("root")
        out["experiments"] = [asdict(e) for e in self.experiments]
        return out

    def write(self, directory: str | Path | None = None) -> Path:
        """Write ``manifest.json`` into `directory` (default: the root)."""
        path = Path(directory or self.root) / MANIFEST_NAME
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        return path

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], root: Path = Path()) -> RunManifest:
        experiments = tuple(ExperimentOutputs.from_dict(e) for e in data["experiments"])
        fields_ = {k: v for k, v in data.items() if k != "experiments"}
        return cls(**fields_, experiments=experiments, root=root)

    @classmethod
    def from_file(cls, path: str | Path) -> RunManifest:
        """Load a manifest; `path` may be the JSON file or its directory."""
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_NAME
        return cls.from_dict(json.loads(path.read_text()), root=path.parent)


def write_summary(rows: Iterable[Mapping[str, Any]], path: str | Path) -> int:
    """Write dict rows as CSV with the union of their keys as header.

    Missing values are left empty; returns the number of rows written.
    """
    rows = list(rows)
    header: list[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=header, restval="")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return len(rows)


def _run_one(
    cfg: RunConfig, index: int, threads: int | None
) -> tuple[ExperimentOutputs, ExperimentResult]:
    exp = cfg.experiments[index]
    stem = f"{index:02d}-{exp.stem}"
    out = cfg.output_dir
    records = f"{stem}.jsonl"
    with open(out / records, "w") as fh:

        def sink(rec: Any) -> None:
            fh.write(rec.to_json() + "\n")

        result = run_experiment(
            exp,
            cfg.master_seed,
            threads=threads,
            sink=sink,
            record_timing=cfg.record_timing,
        )
    summary = f"{stem}-summary.csv"
    write_summary(result.summary, out / summary)
    fits = None
    if result.rate_fits:
        fits = f"{stem}-rate.json"
        payload = {k: v.to_dict() for k, v in result.rate_fits.items()}
        (out / fits).write_text(json.dumps(payload, indent=2) + "\n")
    if result.flagged:
        logger.warning(
            "%s: %d of %d trials flagged and excluded",
            stem,
            result.flagged,
            result.trials,
        )
    outputs = ExperimentOutputs(
        name=stem,
        kind=exp.kind,
        m=exp.m,
        degrees=exp.degrees,
        records=records,
        summary=summary,
        rate_fits=fits,
        trials=result.trials,
        flagged=result.flagged,
        checks=dict(result.checks),
    )
    return outputs, result


def run_config(
    path: str | Path,
    *,
    threads: int | None = None,
    seed: int | None = None,
    output_dir: str | Path | None = None,
) -> RunManifest:
    """Run every experiment of a configuration file and write a manifest.

    Outputs land in the configured ``output_dir`` (or `output_dir`): one
    JSONL record file, one CSV summary and, where a decay rate was fitted, a
    rate-fit JSON per experiment, plus ``config.json`` and ``manifest.json``.

    Raises
    ------
    ConfigError
        If the file is unreadable or fails validation.
    ConvergenceError
        If a numerical step fails outside the per-trial loop.
    """
    cfg = load_config(path).with_overrides(seed, threads, output_dir)
    started = _now()
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.output_dir / CONFIG_NAME).write_text(
        json.dumps(cfg.to_dict(), indent=2) + "\n"
    )
    outputs = []
    for i in range(len(cfg.experiments)):
        exp_out, _ = _run_one(cfg, i, cfg.threads)
        outputs.append(exp_out)
    manifest = RunManifest(
        config_hash=cfg.config_hash(),
        version=_version(),
        master_seed=cfg.master_seed,
        started=started,
        finished=_now(),
        config=cfg.to_dict(),
        experiments=tuple(outputs),
        root=cfg.output_dir,
    )
    logger.info("wrote %s", manifest.write())
    return manifest

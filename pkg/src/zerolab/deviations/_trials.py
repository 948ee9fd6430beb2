"""Shared trial loop of the experiment drivers.

Trials are cut into batches of ``cfg.batch_size`` consecutive indices; each
batch samples its coefficients from the keyed generator, evaluates them and
returns one `TrialRecord` per trial.  Batches run through `ordered_map`, so
records always arrive in trial order whatever the thread count.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any, Callable, Union

import numpy as np

from zerolab._exceptions import ConvergenceError
from zerolab.ensemble import EnsembleSpec, sample_coefficients
from zerolab.utils import ordered_map, throttled
from zerolab.zeros import RootSet, find_roots_batch

from ._records import TrialRecord

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence

    from typing_extensions import TypeAlias

    from ._config import ExperimentConfig
    from ._fit import RateFit

__all__ = ["ExperimentResult", "RecordSink", "solve_batch", "trial_stream"]

logger = logging.getLogger(__name__)

PROGRESS_INTERVAL_MS = 2000

RecordSink: TypeAlias = Callable[[TrialRecord], Any]
BatchEvaluator: TypeAlias = Callable[
    [EnsembleSpec, "Sequence[int]", np.ndarray], "list[TrialRecord]"
]
RootsOrFailure: TypeAlias = Union[RootSet, str]


@dataclass(frozen=True)
class ExperimentResult:
    """Summary of one experiment.

    Parameters
    ----------
    config : ExperimentConfig
        The experiment that was run.
    summary : tuple[dict, ...]
        One row per degree (and threshold, for tail experiments).
    rate_fits : dict[str, RateFit]
        Decay-rate fits keyed by a label such as ``"hole"`` or
        ``"delta=0.15"``.
    checks : dict[str, bool]
        Named pass/fail results of the deterministic checks.
    trials : int
        Records produced, flagged ones included.
    flagged : int
        Records excluded because a numerical step failed.
    """

    config: ExperimentConfig
    summary: tuple[dict[str, Any], ...] = ()
    rate_fits: dict[str, RateFit] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    trials: int = 0
    flagged: int = 0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.config.stem,
            "kind": self.config.kind,
            "trials": self.trials,
            "flagged": self.flagged,
            "checks": dict(self.checks),
            "rate_fits": {k: v.to_dict() for k, v in self.rate_fits.items()},
            "summary": [dict(row) for row in self.summary],
        }


def _log_progress(name: str, N: int, done: int, total: int) -> None:
    logger.info("%s N=%d: %d/%d trials", name, N, done, total)


def trial_stream(
    cfg: ExperimentConfig,
    N: int,
    evaluate: BatchEvaluator,
    master_seed: int = 0,
    threads: int | None = None,
    sink: RecordSink | None = None,
    record_timing: bool = False,
) -> Iterator[TrialRecord]:
    """Yield the records of trials ``0 .. cfg.trials - 1`` at degree N.

    Every record is also passed to `sink` (e.g. a JSONL writer) before it is
    yielded.  With `record_timing` each record carries the wall time of its
    batch divided by the batch size.
    """
    spec = EnsembleSpec(cfg.m, N, master_seed)
    size = cfg.batch_size
    batches = [range(s, min(s + size, cfg.trials)) for s in range(0, cfg.trials, size)]

    def work(batch: range) -> list[TrialRecord]:
        start = time.perf_counter()
        records = evaluate(spec, batch, sample_coefficients(spec, batch))
        if record_timing:
            per_trial = (time.perf_counter() - start) / len(batch)
            records = [replace(r, wall_time=per_trial) for r in records]
        return records

    progress = throttled(_log_progress, timeout=PROGRESS_INTERVAL_MS)
    done = 0
    for records in ordered_map(work, batches, threads):
        for rec in records:
            if sink is not None:
                sink(rec)
            yield rec
        done += len(records)
        progress(cfg.stem, N, done, cfg.trials)
    progress.flush()


def solve_batch(coeffs: np.ndarray, N: int) -> list[RootsOrFailure]:
    """Roots of every row, or the failure message for rows that do not certify.

    The whole batch is solved at once; if any row fails the batch is solved
    again row by row so that only the failing trials are lost.
    """
    try:
        return list(find_roots_batch(coeffs, N))
    except ConvergenceError:
        pass
    out: list[RootsOrFailure] = []
    for row in coeffs:
        try:
            out.append(find_roots_batch(row[None], N)[0])
        except ConvergenceError as e:
            logger.debug("flagging trial at N=%d: %s", N, e)
            out.append(str(e))
    return out

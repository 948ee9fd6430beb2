from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Callable

from ._experiments import (
    run_hole_experiment,
    run_l1_log_experiment,
    run_max_modulus_experiment,
    run_zero_count_experiment,
)
from ._suites import run_kernel_suite, run_pl_check

if TYPE_CHECKING:
    from ._config import ExperimentConfig
    from ._trials import ExperimentResult, RecordSink

__all__ = ["DRIVERS", "run_experiment"]

logger = logging.getLogger(__name__)

DRIVERS: dict[str, Callable[..., ExperimentResult]] = {
    "zero-count": run_zero_count_experiment,
    "hole": run_hole_experiment,
    "max-modulus": run_max_modulus_experiment,
    "l1-log": run_l1_log_experiment,
    "kernel-suite": run_kernel_suite,
    "pl-check": run_pl_check,
}


def run_experiment(
    cfg: ExperimentConfig,
    master_seed: int = 0,
    *,
    threads: int | None = None,
    sink: RecordSink | None = None,
    record_timing: bool = False,
) -> ExperimentResult:
    """Run `cfg` with the driver registered for its kind."""
    try:
        driver = DRIVERS[cfg.kind]
    except KeyError:
        raise ValueError(f"no driver for experiment kind {cfg.kind!r}") from None
    logger.info("running %s (%s, N=%s)", cfg.stem, cfg.kind, list(cfg.degrees))
    return driver(
        cfg, master_seed, threads=threads, sink=sink, record_timing=record_timing
    )

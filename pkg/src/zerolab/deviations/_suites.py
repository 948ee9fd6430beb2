"""Deterministic check suites: kernel identities and the Poincaré–Lelong pairing."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.stats import norm

from zerolab._chart import ChartPoint
from zerolab._exceptions import ConvergenceError
from zerolab.currents import TestFunction, pl_linear_statistic, smooth_indicator
from zerolab.ensemble import (
    EnsembleSpec,
    PolySection,
    basis_sum,
    keyed_uniforms,
    sample_coefficients,
    sample_section,
    szego_diagonal,
)
from zerolab.kernel import (
    build_lattice,
    coherent_values,
    covariance_matrix,
    decay_regimes,
    min_eigenvalue,
    row_sum_max,
    whiten,
)
from zerolab.utils import ordered_map

from ._records import TrialRecord
from ._trials import ExperimentResult, solve_batch, trial_stream

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ._config import ExperimentConfig
    from ._trials import BatchEvaluator, RecordSink

__all__ = ["run_kernel_suite", "run_pl_check"]

logger = logging.getLogger(__name__)

BASIS_SUM_POINTS = 100
BASIS_SUM_STREAM = 2
BASIS_SUM_RTOL = 1e-9
ROW_SUM_BOUND = 0.5
MIN_EIGENVALUE = 0.5
FAR_FIELD_BOUND = 10.0
PL_RTOL = 1e-3
# two-sided tail of a 3 sigma deviation, shared out over all matrix entries
_FAMILY_TAIL = 2 * norm.sf(3.0)


def _random_points(m: int, master_seed: int) -> np.ndarray:
    # chart-0 points with coordinates uniform in the square [-2, 2]^2
    u = keyed_uniforms(master_seed, 0, 2 * m * BASIS_SUM_POINTS, BASIS_SUM_STREAM)
    z = (4 * u[0::2] - 2) + 1j * (4 * u[1::2] - 2)
    z = z.reshape(BASIS_SUM_POINTS, m)
    return np.column_stack([np.ones(BASIS_SUM_POINTS, dtype=complex), z])


def _whitening_moments(
    cfg: ExperimentConfig, N: int, master_seed: int, threads: int | None
) -> dict[str, Any]:
    """Monte Carlo check that whitened coherent values are iid standard."""
    center = ChartPoint(0, (0j,) * cfg.m)
    lattice = build_lattice(center, cfg.lattice_t, cfg.lattice_a, N)
    delta = covariance_matrix(lattice)
    spec = EnsembleSpec(cfg.m, N, master_seed)
    size = cfg.batch_size
    batches = [range(s, min(s + size, cfg.trials)) for s in range(0, cfg.trials, size)]

    def work(batch: range) -> tuple[np.ndarray, np.ndarray]:
        xi = coherent_values(sample_coefficients(spec, batch), lattice)
        zeta = whiten(xi, delta)
        bound = math.sqrt(2 * lattice.n) * np.max(np.abs(xi), axis=1)
        linf_ok = np.max(np.abs(zeta), axis=1) <= bound * (1 + 1e-12)
        return zeta.T @ zeta.conj(), linf_ok

    second = np.zeros((lattice.n, lattice.n), dtype=complex)
    linf_ok: list[np.ndarray] = []
    for moment, ok in ordered_map(work, batches, threads):
        second += moment
        linf_ok.append(ok)
    cov = second / cfg.trials
    # each entry of the sample covariance has standard error 1 / sqrt(T)
    sigmas = np.abs(cov - np.eye(lattice.n)) * math.sqrt(cfg.trials)
    threshold = float(norm.isf(_FAMILY_TAIL / 2 / lattice.n**2))
    return {
        "points": lattice.n,
        "row_sum_max": row_sum_max(delta),
        "min_eigenvalue": min_eigenvalue(delta),
        "whitening_max_sigma": float(sigmas.max()),
        "whitening_threshold": threshold,
        "linf_violations": int(np.count_nonzero(~np.concatenate(linf_ok))),
        "_linf_ok": np.concatenate(linf_ok),
    }


def run_kernel_suite(
    cfg: ExperimentConfig,
    master_seed: int = 0,
    *,
    threads: int | None = None,
    sink: RecordSink | None = None,
    record_timing: bool = False,
) -> ExperimentResult:
    """Lattice spectrum, whitening, L-infinity bound, decay regimes and basis sum.

    Per degree N the suite builds the coherent-state lattice around the
    origin with parameters ``(lattice_t, lattice_a)`` and checks:

    - off-diagonal row sums of the covariance stay below 1/2 and its
      smallest eigenvalue above 1/2;
    - the sample covariance of the whitened values of `trials` random
      sections matches the identity entrywise at a family-wise 3 sigma level;
    - ``max |zeta| <= sqrt(2n) max |xi|`` for every trial;
    - ``P_N N^{m+1} <= 10`` beyond the near/far split and the near-field
      deviation from the Gaussian decreases with N;
    - the basis sum equals the Szegő diagonal at 100 points.
    """
    rows: list[dict[str, Any]] = []
    checks = {
        "row_sum": True,
        "min_eigenvalue": True,
        "whitening": True,
        "linf_bound": True,
        "far_field": True,
        "near_field_decreasing": True,
        "basis_sum": True,
    }
    total = 0
    previous_near = math.inf
    for N in cfg.degrees:
        stats = _whitening_moments(cfg, N, master_seed, threads)
        linf_ok = stats.pop("_linf_ok")
        for t, ok in enumerate(linf_ok):
            rec = TrialRecord(cfg.stem, t, N, bound_ok=bool(ok))
            if sink is not None:
                sink(rec)
        total += linf_ok.size
        regimes = decay_regimes(N, cfg.m)
        exact = szego_diagonal(cfg.m, N)
        sums = basis_sum(cfg.m, N, _random_points(cfg.m, master_seed))
        basis_error = float(np.max(np.abs(sums / exact - 1)))
        row = {
            "experiment": cfg.stem,
            "N": N,
            **stats,
            "near_deviation": regimes.near_deviation,
            "far_scaled_max": regimes.far_scaled_max,
            "basis_sum_error": basis_error,
        }
        rows.append(row)
        checks["row_sum"] &= stats["row_sum_max"] < ROW_SUM_BOUND
        checks["min_eigenvalue"] &= stats["min_eigenvalue"] >= MIN_EIGENVALUE
        whitened = stats["whitening_max_sigma"] <= stats["whitening_threshold"]
        checks["whitening"] &= whitened
        checks["linf_bound"] &= stats["linf_violations"] == 0
        checks["far_field"] &= regimes.far_scaled_max <= FAR_FIELD_BOUND
        checks["near_field_decreasing"] &= regimes.near_deviation < previous_near
        checks["basis_sum"] &= basis_error <= BASIS_SUM_RTOL
        previous_near = regimes.near_deviation
        logger.info(
            "%s N=%d: row sum %.4f, min eigenvalue %.4f",
            cfg.stem,
            N,
            stats["row_sum_max"],
            stats["min_eigenvalue"],
        )
    return ExperimentResult(cfg, tuple(rows), {}, checks, total, 0)


def _pl_evaluator(cfg: ExperimentConfig, psi: TestFunction) -> BatchEvaluator:
    def evaluate(
        spec: EnsembleSpec, batch: Sequence[int], coeffs: np.ndarray
    ) -> list[TrialRecord]:
        N = spec.N
        out = []
        for t, c, roots in zip(batch, coeffs, solve_batch(coeffs, N)):
            if isinstance(roots, str):
                out.append(TrialRecord(cfg.stem, t, N, flagged=roots))
                continue
            s = PolySection(spec, c, trial=t)
            try:
                value = pl_linear_statistic(s, psi, cfg.quadrature, roots, threads=1)
            except ConvergenceError as e:
                out.append(TrialRecord(cfg.stem, t, N, flagged=str(e)))
                continue
            direct = math.fsum(psi.values_homogeneous(roots.homogeneous()))
            out.append(TrialRecord(cfg.stem, t, N, pl_error=abs(value - direct)))
        return out

    return evaluate


def run_pl_check(
    cfg: ExperimentConfig,
    master_seed: int = 0,
    *,
    threads: int | None = None,
    sink: RecordSink | None = None,
    record_timing: bool = False,
) -> ExperimentResult:
    """Compare the quadrature pairing int_Z psi with the sum of psi over the zeros.

    psi is the inner smoothed indicator of the configured domain.  A trial
    passes when the two agree to ``1e-3 N``.  The constant test function,
    paired through the FS volume quadrature, must give N to 1e-6.
    """
    psi = smooth_indicator(cfg.domain, cfg.width, "inner")
    one = TestFunction(cfg.m, 1.0)
    evaluate = _pl_evaluator(cfg, psi)
    rows: list[dict[str, Any]] = []
    total = flagged = 0
    agree = constant_ok = True
    for N in cfg.degrees:
        errors = []
        stream = trial_stream(
            cfg, N, evaluate, master_seed, threads, sink, record_timing
        )
        for rec in stream:
            total += 1
            if rec.ok:
                errors.append(rec.pl_error)
            else:
                flagged += 1
        first = sample_section(EnsembleSpec(cfg.m, N, master_seed), 0)
        constant_error = abs(pl_linear_statistic(first, one, cfg.quadrature) - N)
        tolerance = PL_RTOL * N
        max_error = max(errors, default=math.nan)
        rows.append(
            {
                "experiment": cfg.stem,
                "N": N,
                "trials": len(errors),
                "max_error": max_error,
                "mean_error": math.fsum(errors) / len(errors) if errors else None,
                "tolerance": tolerance,
                "constant_error": constant_error,
            }
        )
        agree &= bool(errors) and max_error <= tolerance
        constant_ok &= constant_error <= 1e-6
    checks = {"pl_agreement": agree, "constant_total": constant_ok}
    return ExperimentResult(cfg, tuple(rows), {}, checks, total, flagged)

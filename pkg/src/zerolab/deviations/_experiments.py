"""Monte Carlo drivers for zero counts, holes, maximum modulus and L1 log norms.

Each driver loops over the degrees of an `ExperimentConfig`, streams the
per-trial records through `trial_stream` and reduces them with
`BernoulliTally` counters, so a run can be replayed exactly from its JSONL
records.  Trials whose root solve or quadrature fails are kept as flagged
records and excluded from every estimate.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import replace
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.integrate import quad as scipy_quad

from zerolab._exceptions import CensoredEstimateWarning, ConvergenceError
from zerolab.currents import LogIntegrals, integrate_log_modulus, nevanlinna_bracket
from zerolab.ensemble import PolySection, normalization, szego_diagonal
from zerolab.zeros import DomainSpec, count_in_domain, max_modulus_batch

from ._fit import RatePoint, fit_rate
from ._lower_bound import bound_consistency, hole_lower_bound
from ._records import BernoulliTally, TrialRecord
from ._trials import ExperimentResult, solve_batch, trial_stream

if TYPE_CHECKING:
    from collections.abc import Sequence

    from zerolab.ensemble import EnsembleSpec

    from ._config import ExperimentConfig
    from ._fit import RateFit
    from ._trials import BatchEvaluator, RecordSink

__all__ = [
    "MIN_HOLE_HITS",
    "expected_count_fraction",
    "predicted_log_integrals",
    "run_hole_experiment",
    "run_l1_log_experiment",
    "run_max_modulus_experiment",
    "run_zero_count_experiment",
]

logger = logging.getLogger(__name__)

MIN_HOLE_HITS = 50
_EULER_GAMMA = float(np.euler_gamma)


def expected_count_fraction(domain: DomainSpec) -> float:
    """E[count / N]: ``Area_FS(U) / pi`` on CP^1, ``r^2 / (1 + r^2)`` for balls.

    For m > 1 only centred balls are supported; the value is the expected
    normalized Nevanlinna counting function.
    """
    if domain.m == 1:
        return domain.fs_area() / math.pi
    if domain.kind != "euclidean_disk" or domain.center.norm_squared():
        raise ValueError("for m > 1 the expected fraction needs a centred ball")
    r2 = domain.radii[0] ** 2
    return r2 / (1 + r2)


def predicted_log_integrals(m: int, N: int) -> LogIntegrals:
    """Expected signed and absolute integrals of log|s|_h, orthonormal normalization.

    At every point |s|_h^2 = Pi_N X with X ~ Exp(1), so both integrals reduce
    to one-point moments of log X times the volume ``pi^m / m!``; the signed
    one is ``vol (log Pi_N - gamma) / 2``.
    """
    vol = math.pi**m / math.factorial(m)
    L = math.log(szego_diagonal(m, N))

    def integrand(x: float) -> float:
        return abs(L + math.log(x)) * math.exp(-x)

    split = math.exp(-L)
    head, _ = scipy_quad(integrand, 0.0, split)
    tail, _ = scipy_quad(integrand, split, math.inf)
    return LogIntegrals(0.5 * vol * (L - _EULER_GAMMA), 0.5 * vol * (head + tail))


def _tail_rows(
    cfg: ExperimentConfig,
    N: int,
    tallies: Sequence[BernoulliTally],
    extra: dict[str, Any],
) -> list[dict[str, Any]]:
    rows = []
    for delta, tally in zip(cfg.deltas, tallies):
        lo, hi = tally.interval(cfg.confidence)
        rows.append(
            {
                "experiment": cfg.stem,
                "N": N,
                "delta": delta,
                "trials": tally.trials,
                "hits": tally.hits,
                "p_hat": tally.estimate,
                "ci_low": lo,
                "ci_high": hi,
                "censored": tally.hits == 0,
                **extra,
            }
        )
    return rows


_POINT_KEYS = ("N", "p_hat", "ci_low", "ci_high", "trials", "censored")


def _rate_point(row: dict[str, Any]) -> RatePoint:
    return RatePoint(*(row[k] for k in _POINT_KEYS))


def _delta_fits(
    cfg: ExperimentConfig, rows: Sequence[dict[str, Any]]
) -> dict[str, RateFit]:
    fits: dict[str, RateFit] = {}
    for delta in cfg.deltas:
        points = [_rate_point(r) for r in rows if r["delta"] == delta]
        try:
            fits[f"delta={delta:g}"] = fit_rate(points, cfg.m + 1)
        except ValueError as e:
            logger.info("%s: no rate fit for delta=%g (%s)", cfg.stem, delta, e)
    return fits


# ------------------------------- zero counts -------------------------------


def _count_evaluator(cfg: ExperimentConfig) -> BatchEvaluator:
    def evaluate(
        spec: EnsembleSpec, batch: Sequence[int], coeffs: np.ndarray
    ) -> list[TrialRecord]:
        N = spec.N
        out = []
        if spec.m == 1:
            for t, roots in zip(batch, solve_batch(coeffs, N)):
                if isinstance(roots, str):
                    out.append(TrialRecord(cfg.stem, t, N, flagged=roots))
                    continue
                count = count_in_domain(roots, cfg.domain)
                rec = TrialRecord(cfg.stem, t, N, count=count, fraction=count / N)
                out.append(replace(rec, hole=count == 0))
            return out
        r = cfg.domain.radii[0]
        for t, c in zip(batch, coeffs):
            s = PolySection(spec, c, trial=t)
            try:
                lower, upper = nevanlinna_bracket(s, r, cfg.width, cfg.quadrature)
            except ConvergenceError as e:
                out.append(TrialRecord(cfg.stem, t, N, flagged=str(e)))
                continue
            out.append(TrialRecord(cfg.stem, t, N, fraction=0.5 * (lower + upper) / N))
        return out

    return evaluate


def run_zero_count_experiment(
    cfg: ExperimentConfig,
    master_seed: int = 0,
    *,
    threads: int | None = None,
    sink: RecordSink | None = None,
    record_timing: bool = False,
) -> ExperimentResult:
    """Estimate P(|count / N - Area_FS(U) / pi| > delta) for every delta and N.

    For m = 1 zeros are located and counted; for m = 2 the normalized zero
    volume in a centred ball is the midpoint of its Poincaré–Lelong bracket.
    """
    expected = expected_count_fraction(cfg.domain)
    evaluate = _count_evaluator(cfg)
    rows: list[dict[str, Any]] = []
    total = flagged = 0
    for N in cfg.degrees:
        tallies = [BernoulliTally() for _ in cfg.deltas]
        fractions = []
        stream = trial_stream(
            cfg, N, evaluate, master_seed, threads, sink, record_timing
        )
        for rec in stream:
            total += 1
            if not rec.ok:
                flagged += 1
                continue
            dev = abs(rec.fraction - expected)
            for delta, tally in zip(cfg.deltas, tallies):
                tally.add(dev > delta)
            fractions.append(rec.fraction)
        extra = {"expected": expected, "mean": _mean(fractions)}
        rows.extend(_tail_rows(cfg, N, tallies, extra))
    fits = _delta_fits(cfg, rows)
    return ExperimentResult(cfg, tuple(rows), fits, {}, total, flagged)


# ---------------------------------- holes ----------------------------------


def _hole_evaluator(cfg: ExperimentConfig) -> BatchEvaluator:
    def evaluate(
        spec: EnsembleSpec, batch: Sequence[int], coeffs: np.ndarray
    ) -> list[TrialRecord]:
        out = []
        for t, roots in zip(batch, solve_batch(coeffs, spec.N)):
            if isinstance(roots, str):
                out.append(TrialRecord(cfg.stem, t, spec.N, flagged=roots))
            else:
                count = count_in_domain(roots, cfg.domain)
                rec = TrialRecord(cfg.stem, t, spec.N, count=count)
                out.append(replace(rec, hole=count == 0))
        return out

    return evaluate


def run_hole_experiment(
    cfg: ExperimentConfig,
    master_seed: int = 0,
    *,
    threads: int | None = None,
    sink: RecordSink | None = None,
    record_timing: bool = False,
) -> ExperimentResult:
    """Hole probability P(no zero in U) per degree, with the analytic lower bound.

    Memory is O(1) in the number of trials.  A degree with no hole observed
    is marked censored and left out of the rate fit; fewer than
    `MIN_HOLE_HITS` hits issue a `CensoredEstimateWarning`.  The
    ``lower_bound`` check covers only degrees where `bound_consistency` is
    conclusive and is omitted when none is.
    """
    evaluate = _hole_evaluator(cfg)
    rows: list[dict[str, Any]] = []
    points: list[RatePoint] = []
    total = flagged = 0
    verdicts: list[bool] = []
    witnessed = True
    for N in cfg.degrees:
        tally = BernoulliTally()
        stream = trial_stream(
            cfg, N, evaluate, master_seed, threads, sink, record_timing
        )
        for rec in stream:
            total += 1
            if rec.ok:
                tally.add(bool(rec.hole))
            else:
                flagged += 1
        lo, hi = tally.interval(cfg.confidence)
        censored = tally.hits == 0
        if tally.hits < MIN_HOLE_HITS:
            warnings.warn(
                f"{cfg.stem}: only {tally.hits} holes in {tally.trials} trials at "
                f"N={N}; the estimate is underpowered",
                CensoredEstimateWarning,
                stacklevel=2,
            )
        row: dict[str, Any] = {
            "experiment": cfg.stem,
            "N": N,
            "trials": tally.trials,
            "hits": tally.hits,
            "p_hat": tally.estimate,
            "ci_low": lo,
            "ci_high": hi,
            "censored": censored,
            "neg_log_rate": (
                -math.log(tally.estimate) / N ** (cfg.m + 1) if tally.hits else None
            ),
        }
        try:
            bound = hole_lower_bound(cfg.domain, N, cfg.witness_samples, master_seed)
        except ValueError as e:
            logger.info("%s: no analytic lower bound (%s)", cfg.stem, e)
        else:
            row["lower_bound"] = bound.bound
            verdict = bound_consistency(bound.bound, tally.estimate, lo, hi)
            row["bound_consistent"] = verdict
            if verdict is not None:
                verdicts.append(verdict)
            if bound.witness_ok is not None:
                row["witness_ok"] = bound.witness_ok
                witnessed &= bound.witness_ok
        rows.append(row)
        points.append(RatePoint(N, tally.estimate, lo, hi, tally.trials, censored))
    fits: dict[str, RateFit] = {}
    try:
        fits["hole"] = fit_rate(points, cfg.m + 1)
    except ValueError as e:
        logger.info("%s: no rate fit (%s)", cfg.stem, e)
    checks: dict[str, bool] = {}
    if verdicts:
        checks["lower_bound"] = all(verdicts)
    else:
        logger.info("%s: lower bound check inconclusive at every degree", cfg.stem)
    if cfg.witness_samples:
        checks["witness"] = witnessed
    return ExperimentResult(cfg, tuple(rows), fits, checks, total, flagged)


# ----------------------------- maximum modulus ------------------------------


def _modulus_evaluator(cfg: ExperimentConfig) -> BatchEvaluator:
    def evaluate(
        spec: EnsembleSpec, batch: Sequence[int], coeffs: np.ndarray
    ) -> list[TrialRecord]:
        N = spec.N
        raw = max_modulus_batch(coeffs, N, cfg.domain, cfg.refine_levels)
        # raw M <= ||c|| is the bound M <= ||c|| sqrt(Pi_N) after normalization
        bound = np.linalg.norm(coeffs, axis=1) * (1 + 1e-12)
        log_max = np.log(raw) + math.log(normalization(1, N))
        return [
            TrialRecord(cfg.stem, t, N, log_max=float(lm), bound_ok=bool(r <= b))
            for t, lm, r, b in zip(batch, log_max, raw, bound)
        ]

    return evaluate


def run_max_modulus_experiment(
    cfg: ExperimentConfig,
    master_seed: int = 0,
    *,
    threads: int | None = None,
    sink: RecordSink | None = None,
    record_timing: bool = False,
) -> ExperimentResult:
    """Tails of (1/N) log M_N over U, where M_N = sup_U |s|_h (orthonormal basis).

    Every trial is also checked against the deterministic bound
    ``M_N <= ||c|| sqrt(Pi_N)``.
    """
    evaluate = _modulus_evaluator(cfg)
    rows: list[dict[str, Any]] = []
    total = violations = 0
    for N in cfg.degrees:
        tallies = [BernoulliTally() for _ in cfg.deltas]
        scaled = []
        stream = trial_stream(
            cfg, N, evaluate, master_seed, threads, sink, record_timing
        )
        for rec in stream:
            total += 1
            violations += not rec.bound_ok
            value = rec.log_max / N
            for delta, tally in zip(cfg.deltas, tallies):
                tally.add(abs(value) > delta)
            scaled.append(value)
        extra = {"mean": _mean(scaled), "median": float(np.median(scaled))}
        rows.extend(_tail_rows(cfg, N, tallies, extra))
    if violations:
        logger.warning(
            "%s: %d trials violate M <= ||c|| sqrt(Pi_N)", cfg.stem, violations
        )
    checks = {"deterministic_bound": violations == 0}
    return ExperimentResult(cfg, tuple(rows), {}, checks, total, 0)


# ------------------------------- L1 log norm --------------------------------


def _log_evaluator(cfg: ExperimentConfig) -> BatchEvaluator:
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
                signed, absolute = integrate_log_modulus(
                    s, cfg.quadrature, roots, normalized=True, threads=1
                )
            except ConvergenceError as e:
                out.append(TrialRecord(cfg.stem, t, N, flagged=str(e)))
                continue
            rec = TrialRecord(cfg.stem, t, N, signed_log=signed, abs_log=absolute)
            out.append(rec)
        return out

    return evaluate


def run_l1_log_experiment(
    cfg: ExperimentConfig,
    master_seed: int = 0,
    *,
    threads: int | None = None,
    sink: RecordSink | None = None,
    record_timing: bool = False,
) -> ExperimentResult:
    """Estimate P(int |log|s|_h| dVol >= delta N) and compare means with theory."""
    evaluate = _log_evaluator(cfg)
    rows: list[dict[str, Any]] = []
    total = flagged = 0
    dominated = True
    for N in cfg.degrees:
        tallies = [BernoulliTally() for _ in cfg.deltas]
        signed, absolute = [], []
        stream = trial_stream(
            cfg, N, evaluate, master_seed, threads, sink, record_timing
        )
        for rec in stream:
            total += 1
            if not rec.ok:
                flagged += 1
                continue
            for delta, tally in zip(cfg.deltas, tallies):
                tally.add(rec.abs_log >= delta * N)
            dominated &= rec.abs_log >= abs(rec.signed_log) * (1 - 1e-12)
            signed.append(rec.signed_log)
            absolute.append(rec.abs_log)
        predicted = predicted_log_integrals(cfg.m, N)
        extra = {
            "mean": _mean(absolute),
            "mean_signed": _mean(signed),
            "predicted": predicted.absolute,
            "predicted_signed": predicted.signed,
        }
        rows.extend(_tail_rows(cfg, N, tallies, extra))
    checks = {"absolute_dominates_signed": dominated}
    return ExperimentResult(cfg, tuple(rows), {}, checks, total, flagged)


def _mean(values: Sequence[float]) -> float | None:
    return math.fsum(values) / len(values) if values else None

"""Experiment drivers: tail and hole probabilities, rate fits and check suites."""

from ._config import ExperimentConfig, ExperimentKind, RunConfig, load_config
from ._experiments import (
    expected_count_fraction,
    predicted_log_integrals,
    run_hole_experiment,
    run_l1_log_experiment,
    run_max_modulus_experiment,
    run_zero_count_experiment,
)
from ._fit import LinearFit, RateFit, RatePoint, fit_rate
from ._lower_bound import (
    HoleLowerBound,
    adapted_basis,
    bound_consistency,
    hole_lower_bound,
    sigma_center,
    sigma_power_norm,
    witness_sections,
)
from ._records import (
    BernoulliTally,
    TrialRecord,
    read_records,
    wilson_interval,
    write_records,
)
from ._runner import DRIVERS, run_experiment
from ._suites import run_kernel_suite, run_pl_check
from ._trials import ExperimentResult

__all__ = [
    "DRIVERS",
    "BernoulliTally",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentResult",
    "HoleLowerBound",
    "LinearFit",
    "RateFit",
    "RatePoint",
    "RunConfig",
    "TrialRecord",
    "adapted_basis",
    "bound_consistency",
    "expected_count_fraction",
    "fit_rate",
    "hole_lower_bound",
    "load_config",
    "predicted_log_integrals",
    "read_records",
    "run_experiment",
    "run_hole_experiment",
    "run_kernel_suite",
    "run_l1_log_experiment",
    "run_max_modulus_experiment",
    "run_pl_check",
    "run_zero_count_experiment",
    "sigma_center",
    "sigma_power_norm",
    "wilson_interval",
    "witness_sections",
    "write_records",
]

"""Fubini–Study Szegő kernel, coherent-state lattices and whitening."""

from zerolab._chart import ChartPoint

from ._decay import DecayRegimes, decay_profile, decay_regimes, regime_split
from ._distance import (
    covariance_entry,
    fs_cosines,
    fs_distance,
    fs_distances,
    p_kernel,
)
from ._lattice import (
    CovMatrix,
    Lattice,
    build_lattice,
    coherent_values,
    covariance_matrix,
    min_eigenvalue,
    minimal_spacing,
    row_sum_max,
    whiten,
)

__all__ = [
    "ChartPoint",
    "CovMatrix",
    "DecayRegimes",
    "Lattice",
    "build_lattice",
    "coherent_values",
    "covariance_entry",
    "covariance_matrix",
    "decay_profile",
    "decay_regimes",
    "fs_cosines",
    "fs_distance",
    "fs_distances",
    "min_eigenvalue",
    "minimal_spacing",
    "p_kernel",
    "regime_split",
    "row_sum_max",
    "whiten",
]

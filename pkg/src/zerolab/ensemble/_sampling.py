"""Counter-based sampling of the Gaussian coefficients.

Every coefficient is a pure function of ``(master_seed, trial_index,
coefficient_index)``: trial ``t`` reads the Philox stream keyed by the master
seed and starting at counter ``(0, 0, t, stream)``, and coefficient ``k`` is
built from the raw draws ``2k`` and ``2k + 1`` of that stream.  Sampling order
and thread layout therefore never change the numbers.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ._section import PolySection

if TYPE_CHECKING:
    from collections.abc import Iterable

    from ._spec import EnsembleSpec

__all__ = ["keyed_uniforms", "sample_coefficients", "sample_section"]

_TWO_PI = 2.0 * np.pi


def keyed_uniforms(
    master_seed: int, trial_index: int, size: int, stream: int = 0
) -> np.ndarray:
    """Return `size` uniforms in the open interval (0, 1) for one trial.

    Parameters
    ----------
    master_seed : int
        Philox key (64-bit unsigned).
    trial_index : int
        Trial counter, 0 <= trial_index < 2**64.
    size : int
        Number of draws.
    stream : int
        Independent sub-stream of the same trial (e.g. for conditioned
        resampling), by default 0.
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be nonnegative, got {trial_index}")
    counter = np.array([0, 0, trial_index, stream], dtype=np.uint64)
    raw = np.random.Philox(key=master_seed, counter=counter).random_raw(size)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def _box_muller(u: np.ndarray) -> np.ndarray:
    # |c|^2 = -log u_1 is Exp(1), so E|c|^2 = 1 and Re, Im have variance 1/2
    radius = np.sqrt(-np.log(u[..., 0::2]))
    return radius * np.exp(1j * _TWO_PI * u[..., 1::2])


def sample_coefficients(
    spec: EnsembleSpec, trial_indices: Iterable[int], stream: int = 0
) -> np.ndarray:
    """Standard complex Gaussian coefficients for a batch of trials.

    Returns
    -------
    np.ndarray
        Complex array of shape ``(len(trial_indices), d_N)``.
    """
    d = spec.dimension
    rows = [
        keyed_uniforms(spec.master_seed, int(t), 2 * d, stream) for t in trial_indices
    ]
    if not rows:
        return np.empty((0, d), dtype=complex)
    return _box_muller(np.vstack(rows))


def sample_section(spec: EnsembleSpec, trial_index: int) -> PolySection:
    """Draw the section of trial `trial_index` from the ensemble `spec`."""
    coeffs = sample_coefficients(spec, [trial_index])[0]
    return PolySection(spec, coeffs, trial=trial_index)

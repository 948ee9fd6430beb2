from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

__all__ = ["DecayRegimes", "decay_profile", "decay_regimes", "regime_split"]


class DecayRegimes(NamedTuple):
    """Near/far comparison of P_N = cos^N(d) with the Gaussian exp(-N d^2 / 2)."""

    N: int
    m: int
    split: float
    near_deviation: float
    far_scaled_max: float


def regime_split(N: int, m: int) -> float:
    """d* = sqrt(2m + 3) sqrt(log N / N), the near/far boundary."""
    return math.sqrt(2 * m + 3) * math.sqrt(math.log(N) / N)


def decay_profile(N: int, distances: np.ndarray) -> np.ndarray:
    """Rows ``(d, P_N(d), exp(-N d^2 / 2))`` for the given FS distances."""
    d = np.asarray(distances, dtype=float)
    if np.any((d < 0) | (d > math.pi / 2)):
        raise ValueError("FS distances must lie in [0, pi/2]")
    return np.column_stack([d, np.cos(d) ** N, np.exp(-0.5 * N * d**2)])


def decay_regimes(N: int, m: int = 1, samples: int = 4001) -> DecayRegimes:
    """Evaluate both decay regimes on a fine distance grid.

    ``near_deviation`` is sup |P_N exp(N d^2 / 2) - 1| over d <= d*, and
    ``far_scaled_max`` is max P_N N^{m+1} over d >= d*.
    """
    if N < 2:
        raise ValueError(f"decay regimes need N >= 2, got {N}")
    split = regime_split(N, m)
    near = np.linspace(0.0, min(split, math.pi / 2), samples)
    # log form avoids exp overflow in the ratio
    with np.errstate(divide="ignore"):
        ratio = np.exp(N * (np.log(np.cos(near)) + 0.5 * near**2))
    far = np.linspace(min(split, math.pi / 2), math.pi / 2, samples)
    far_vals = np.cos(far) ** N * float(N) ** (m + 1)
    return DecayRegimes(
        N=N,
        m=m,
        split=split,
        near_deviation=float(np.max(np.abs(ratio - 1.0))),
        far_scaled_max=float(np.max(far_vals)),
    )

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.stats import linregress

if TYPE_CHECKING:
    from collections.abc import Iterable

__all__ = ["LinearFit", "RateFit", "RatePoint", "fit_rate"]


@dataclass(frozen=True)
class RatePoint:
    """Estimated probability p_hat at degree N with its confidence interval."""

    N: int
    p_hat: float
    ci_low: float = math.nan
    ci_high: float = math.nan
    trials: int = 0
    censored: bool = False

    @property
    def neg_log(self) -> float:
        return -math.log(self.p_hat) if self.p_hat > 0 else math.inf


@dataclass(frozen=True)
class LinearFit:
    exponent: int
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class RateFit:
    """Least squares of -log p_hat against N^exponent, plus the N^1 alternative."""

    points: tuple[RatePoint, ...]
    exponent: int
    slope: float
    intercept: float
    r_squared: float
    linear: LinearFit

    @property
    def r_squared_gap(self) -> float:
        """R^2 of the N^exponent fit minus that of the pure exponential fit."""
        return self.r_squared - self.linear.r_squared

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["r_squared_gap"] = self.r_squared_gap
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _linear_fit(x: np.ndarray, y: np.ndarray, exponent: int) -> LinearFit:
    res = linregress(x**exponent, y)
    r2 = float(res.rvalue) ** 2
    if not math.isfinite(r2):
        r2 = 1.0 if np.allclose(y, y[0]) else 0.0
    return LinearFit(exponent, float(res.slope), float(res.intercept), min(1.0, r2))


def fit_rate(
    points: Iterable[RatePoint | tuple[int, float]], exponent: int = 2
) -> RateFit:
    """Fit -log p_hat = C N^exponent + intercept on the usable points.

    Points with p_hat = 0 or marked censored are skipped.

    Raises
    ------
    ValueError
        If fewer than three usable points remain.
    """
    pts = tuple(p if isinstance(p, RatePoint) else RatePoint(*p) for p in points)
    usable = [p for p in pts if p.p_hat > 0 and not p.censored]
    if len(usable) < 3:
        raise ValueError(f"need at least 3 uncensored points, got {len(usable)}")
    x = np.array([p.N for p in usable], dtype=float)
    y = np.array([p.neg_log for p in usable])
    main = _linear_fit(x, y, exponent)
    linear = _linear_fit(x, y, 1)
    return RateFit(pts, exponent, main.slope, main.intercept, main.r_squared, linear)

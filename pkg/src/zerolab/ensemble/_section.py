"""Sections as coefficient vectors, and their Hermitian norms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from ._evaluate import log_norms, monomial_values, norms, weighted_coefficients
from ._spec import EnsembleSpec, dimension, normalization

if TYPE_CHECKING:
    from zerolab._chart import ChartPoint

__all__ = ["PolySection", "evaluate_f", "hermitian_norm"]


@dataclass(frozen=True, eq=False)
class PolySection:
    """A holomorphic section f = sum_J c_J (N choose J)^{1/2} z^J of O(N).

    Parameters
    ----------
    spec : EnsembleSpec
        Ensemble the section belongs to.
    coeffs : np.ndarray
        Complex coefficients c_J in graded lexicographic order.
    trial : int, optional
        Trial index the coefficients were drawn for, if sampled.
    """

    spec: EnsembleSpec
    coeffs: np.ndarray
    trial: int | None = field(default=None)

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=complex).reshape(-1)
        if coeffs.size != self.spec.dimension:
            raise ValueError(
                f"expected d_N = {self.spec.dimension} coefficients for "
                f"m={self.spec.m}, N={self.spec.N}, got {coeffs.size}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("section coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coefficients(
        cls, coeffs: Any, N: int, m: int = 1, master_seed: int = 0
    ) -> PolySection:
        """Build a section from an explicit coefficient vector."""
        return cls(EnsembleSpec(m, N, master_seed), np.asarray(coeffs, dtype=complex))

    @classmethod
    def constant(cls, N: int, m: int = 1) -> PolySection:
        """The section whose chart-0 representative is the constant 1."""
        coeffs = np.zeros(dimension(m, N), dtype=complex)
        coeffs[0] = 1
        return cls(EnsembleSpec(m, N), coeffs)

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def monomial_coefficients(self) -> np.ndarray:
        """c_J (N choose J)^{1/2}, the coefficients of the chart-0 polynomial."""
        return weighted_coefficients(self.coeffs, self.m, self.N)

    def norm(self) -> float:
        """Euclidean norm ||c|| of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    def scaled(self, factor: complex) -> PolySection:
        """The section multiplied by a constant."""
        return PolySection(self.spec, self.coeffs * factor, self.trial)

    # ------------------------ serialization ------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "N": self.N,
            "seed": self.spec.master_seed,
            "trial": self.trial,
            "coeffs": [[c.real, c.imag] for c in self.coeffs.tolist()],
        }

    def to_json(self) -> str:
        """Serialize to ``{m, N, seed, trial, coeffs: [[re, im], ...]}``."""
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> PolySection:
        try:
            spec = EnsembleSpec(int(data["m"]), int(data["N"]), int(data["seed"]))
            coeffs = np.array([complex(re, im) for re, im in data["coeffs"]])
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"malformed section record: {e}") from e
        trial = data.get("trial")
        return cls(spec, coeffs, None if trial is None else int(trial))

    @classmethod
    def from_json(cls, text: str) -> PolySection:
        return cls.from_dict(json.loads(text))


def evaluate_f(s: PolySection, z: ChartPoint) -> complex:
    """Evaluate the chart-0 polynomial f_N at `z`.

    Points far from the origin are evaluated on the unit polydisc (for m = 1:
    the reversed polynomial at 1/z) and rescaled, so no intermediate power
    overflows before the final scaling.
    """
    if z.chart != 0:
        raise ValueError(f"evaluate_f expects a chart-0 point, got chart {z.chart}")
    if z.m != s.m:
        raise ValueError(f"point has m={z.m} but section has m={s.m}")
    coords = np.asarray(z.coords, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(coords))))
    Z = np.concatenate([[1.0], coords]) / scale
    value = monomial_values(s.monomial_coefficients, s.m, s.N, Z[None, :])[0]
    return complex(value * scale**s.N)


def hermitian_norm(s: PolySection, z: ChartPoint, normalized: bool = False) -> float:
    """|f_N(z)| (1 + ||z||^2)^{-N/2}, computed from any chart.

    Parameters
    ----------
    s : PolySection
        The section.
    z : ChartPoint
        Point in any chart; the value is chart independent.
    normalized : bool
        Multiply by gamma_{N,m}, giving |s|_{h^N} for the orthonormal-basis
        ensemble (whose second moment is the Szegő diagonal). Default False.
    """
    if z.m != s.m:
        raise ValueError(f"point has m={z.m} but section has m={s.m}")
    value = float(norms(s.monomial_coefficients, s.m, s.N, z.homogeneous()[None])[0])
    return value * normalization(s.m, s.N) if normalized else value


def log_hermitian_norm(s: PolySection, z: ChartPoint) -> float:
    """log of the raw Hermitian norm; -inf exactly at zeros."""
    return float(log_norms(s.monomial_coefficients, s.m, s.N, z.homogeneous()[None])[0])

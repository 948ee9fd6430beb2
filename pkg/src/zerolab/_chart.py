"""Affine charts on complex projective space.

A point of CP^m is stored as its coordinates in one of the m + 1 standard
affine charts: chart ``k`` is the open set {Z_k != 0} with coordinates
``Z_j / Z_k`` for ``j != k``, in increasing order of ``j``.  For m = 1 this
gives the two charts ``z`` (chart 0) and ``w = 1/z`` (chart 1), and the
origin of chart 1 is the point at infinity.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Iterable

    import numpy.typing as npt

__all__ = ["ChartPoint", "as_homogeneous", "unit_polydisc"]


@dataclass(frozen=True)
class ChartPoint:
    """A point of CP^m in an affine chart.

    Parameters
    ----------
    chart : int
        Chart id in ``0..m``.
    coords : tuple[complex, ...]
        The m affine coordinates.
    """

    chart: int
    coords: tuple[complex, ...]

    def __post_init__(self) -> None:
        coords = tuple(complex(c) for c in self.coords)
        if not coords:
            raise ValueError("a ChartPoint needs at least one coordinate")
        if not all(cmath.isfinite(c) for c in coords):
            raise ValueError(f"chart coordinates must be finite, got {coords}")
        if not 0 <= self.chart <= len(coords):
            raise ValueError(
                f"chart must lie in 0..{len(coords)} for m={len(coords)}, "
                f"got {self.chart}"
            )
        object.__setattr__(self, "coords", coords)

    @classmethod
    def at(cls, *coords: complex, chart: int = 0) -> ChartPoint:
        """Shorthand constructor: ``ChartPoint.at(0.5 + 1j)``."""
        return cls(chart, tuple(coords))

    @classmethod
    def infinity(cls, m: int = 1) -> ChartPoint:
        """The origin of the last chart (the point at infinity when m = 1)."""
        return cls(m, (0j,) * m)

    @classmethod
    def from_homogeneous(
        cls, Z: Iterable[complex], chart: int | None = None
    ) -> ChartPoint:
        """Build a point from homogeneous coordinates.

        If `chart` is omitted, the best-conditioned chart (largest |Z_k|) is
        used.
        """
        hom = np.asarray(list(Z), dtype=complex)
        if hom.ndim != 1 or hom.size < 2:
            raise ValueError("homogeneous coordinates need at least two entries")
        k = int(np.argmax(np.abs(hom))) if chart is None else chart
        if hom[k] == 0:
            raise ValueError(f"point does not lie in chart {k}")
        affine = np.delete(hom, k) / hom[k]
        return cls(k, tuple(complex(c) for c in affine))

    @property
    def m(self) -> int:
        """Complex dimension of the ambient projective space."""
        return len(self.coords)

    def homogeneous(self) -> np.ndarray:
        """Return homogeneous coordinates with a 1 in position `chart`."""
        return np.insert(np.asarray(self.coords, dtype=complex), self.chart, 1.0)

    def to_chart(self, chart: int) -> ChartPoint:
        """Express the same point in another chart."""
        if chart == self.chart:
            return self
        return ChartPoint.from_homogeneous(self.homogeneous(), chart)

    def norm_squared(self) -> float:
        """Euclidean ||z||^2 of the chart coordinates."""
        return float(sum(abs(c) ** 2 for c in self.coords))


def as_homogeneous(points: Iterable[ChartPoint]) -> np.ndarray:
    """Stack chart points into a ``(P, m + 1)`` homogeneous array."""
    rows = [p.homogeneous() for p in points]
    if not rows:
        raise ValueError("no points given")
    return np.vstack(rows)


def unit_polydisc(Z: npt.ArrayLike) -> np.ndarray:
    """Rescale homogeneous coordinates so that max_k |Z_k| = 1 along the last axis.

    Degree-N forms evaluated on the rescaled coordinates never overflow, which
    is the multi-variable analogue of evaluating the reversed polynomial at
    1/z in the opposite chart.
    """
    Z = np.asarray(Z, dtype=complex)
    scale = np.max(np.abs(Z), axis=-1, keepdims=True)
    if np.any(scale == 0):
        raise ValueError("homogeneous coordinates cannot all vanish")
    return Z / scale

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Literal

import numpy as np

from zerolab._chart import ChartPoint
from zerolab.kernel import fs_distances

if TYPE_CHECKING:
    from typing_extensions import TypeAlias

__all__ = ["DomainKind", "DomainSpec"]

DomainKind: TypeAlias = Literal[
    "euclidean_disk", "fs_cap", "annulus", "complement", "whole"
]
_RADII = {"euclidean_disk": 1, "fs_cap": 1, "annulus": 2, "complement": 1, "whole": 0}
_ORIGIN = ChartPoint(0, (0j,))


@dataclass(frozen=True)
class DomainSpec:
    """A region U of CP^m given in the affine chart 0.

    Kinds
    -----
    ``euclidean_disk``
        ``||z - c|| < r`` (a ball when m = 2).
    ``fs_cap``
        ``dist_FS(z, c) < alpha`` with ``0 < alpha < pi/2``.
    ``annulus``
        ``r_in < |z - c| < r_out``.
    ``complement``
        ``|z - c| > r``, including the point at infinity.
    ``whole``
        All of CP^m.
    """

    kind: DomainKind
    center: ChartPoint = field(default=_ORIGIN)
    radii: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _RADII:
            raise ValueError(
                f"unknown domain kind {self.kind!r}; expected one of {sorted(_RADII)}"
            )
        radii = tuple(float(r) for r in self.radii)
        if len(radii) != _RADII[self.kind]:
            raise ValueError(
                f"{self.kind} needs {_RADII[self.kind]} radii, got {len(radii)}"
            )
        if any(not math.isfinite(r) or r <= 0 for r in radii):
            raise ValueError(f"radii must be positive and finite, got {radii}")
        if self.kind == "annulus" and not radii[0] < radii[1]:
            raise ValueError(f"annulus needs r_in < r_out, got {radii}")
        if self.kind == "fs_cap" and radii[0] >= math.pi / 2:
            raise ValueError(f"cap radius must be below pi/2, got {radii[0]}")
        center = self.center
        if self.kind in ("euclidean_disk", "annulus", "complement"):
            center = center.to_chart(0)
        if self.m > 1 and self.kind not in ("euclidean_disk", "whole"):
            raise ValueError(f"{self.kind} domains are only supported for m = 1")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "center", center)

    # ----------------------------- constructors -----------------------------

    @classmethod
    def disk(cls, radius: float, center: complex | ChartPoint = 0) -> DomainSpec:
        return cls("euclidean_disk", _point(center), (radius,))

    @classmethod
    def ball(cls, radius: float, center: tuple[complex, ...] = (0, 0)) -> DomainSpec:
        return cls("euclidean_disk", ChartPoint(0, tuple(center)), (radius,))

    @classmethod
    def cap(cls, alpha: float, center: complex | ChartPoint = 0) -> DomainSpec:
        return cls("fs_cap", _point(center), (alpha,))

    @classmethod
    def annulus(
        cls, r_in: float, r_out: float, center: complex | ChartPoint = 0
    ) -> DomainSpec:
        return cls("annulus", _point(center), (r_in, r_out))

    @classmethod
    def complement(cls, radius: float, center: complex | ChartPoint = 0) -> DomainSpec:
        return cls("complement", _point(center), (radius,))

    @classmethod
    def whole(cls, m: int = 1) -> DomainSpec:
        return cls("whole", ChartPoint(0, (0j,) * m), ())

    # ------------------------------ geometry -------------------------------

    @property
    def m(self) -> int:
        return self.center.m

    @property
    def contains_infinity(self) -> bool:
        """Whether the origin of chart 1 (m = 1) lies in the domain."""
        if self.kind in ("whole", "complement"):
            return True
        if self.kind == "fs_cap":
            inf = ChartPoint.infinity(self.m).homogeneous()
            return bool(fs_distances(self.center.homogeneous(), inf) < self.radii[0])
        return False

    def contains(self, Z: np.ndarray) -> np.ndarray:
        """Strict-interior membership of homogeneous points ``(..., m + 1)``."""
        Z = np.asarray(Z, dtype=complex)
        if self.kind == "whole":
            return np.ones(Z.shape[:-1], dtype=bool)
        if self.kind == "fs_cap":
            return fs_distances(Z, self.center.homogeneous()) < self.radii[0]
        Z0 = Z[..., 0]
        finite = Z0 != 0
        with np.errstate(divide="ignore", invalid="ignore"):
            z = Z[..., 1:] / Z0[..., None]
            dist = np.sqrt(
                np.sum(np.abs(z - np.asarray(self.center.coords)) ** 2, axis=-1)
            )
        if self.kind == "euclidean_disk":
            return finite & (dist < self.radii[0])
        if self.kind == "annulus":
            return finite & (dist > self.radii[0]) & (dist < self.radii[1])
        return ~finite | (dist > self.radii[0])

    def contains_points(self, z: np.ndarray) -> np.ndarray:
        """Membership of finite chart-0 points given as complex numbers (m = 1)."""
        z = np.asarray(z, dtype=complex)
        Z = np.stack([np.ones_like(z), z], axis=-1)
        return self.contains(Z)

    def as_cap(self) -> tuple[ChartPoint, float]:
        """FS centre and FS radius of a disk or cap (m = 1).

        A Euclidean disk |z - c| < r is the cap whose diameter along the line
        through 0 and c runs between the FS coordinates arctan(|c| - r) and
        arctan(|c| + r).
        """
        if self.m != 1 or self.kind not in ("euclidean_disk", "fs_cap"):
            raise ValueError(f"{self.kind} (m={self.m}) is not an FS cap")
        if self.kind == "fs_cap":
            return self.center, self.radii[0]
        c = self.center.coords[0]
        r = self.radii[0]
        lo, hi = math.atan(abs(c) - r), math.atan(abs(c) + r)
        direction = c / abs(c) if c != 0 else 1.0
        center = math.tan(0.5 * (lo + hi)) * direction
        return ChartPoint(0, (center,)), 0.5 * (hi - lo)

    def euclidean_form(self) -> tuple[str, complex, float]:
        """Chart-0 description ``(kind, center, radius)`` of a disk-like domain.

        Caps not containing infinity are Euclidean disks; caps containing it
        are complements of disks.
        """
        if self.kind in ("euclidean_disk", "complement"):
            return self.kind, self.center.coords[0], self.radii[0]
        if self.kind != "fs_cap":
            raise ValueError(f"{self.kind} has no single-disk form")
        p = self.center.to_chart(0).coords[0] if self.center.homogeneous()[0] else None
        alpha = self.radii[0]
        if p is None:
            # cap around infinity: |z| > cot(alpha)
            return "complement", 0j, 1.0 / math.tan(alpha)
        k = math.cos(alpha) ** 2 * (1 + abs(p) ** 2)
        A = k - abs(p) ** 2
        if abs(A) < 1e-12:
            raise ValueError("cap boundary passes through infinity")
        if A > 0:
            r2 = (abs(p) ** 2 + A * (1 - k)) / A**2
            return "euclidean_disk", p / A, math.sqrt(r2)
        B = -A
        r2 = (abs(p) ** 2 - B * (1 - k)) / B**2
        return "complement", -p / B, math.sqrt(r2)

    def characteristic_radius(self) -> float:
        """Largest smoothing width that still fits inside/outside the boundary."""
        if self.kind == "whole":
            return math.inf
        if self.kind == "annulus":
            return 0.5 * (self.radii[1] - self.radii[0])
        if self.kind == "fs_cap":
            return self.euclidean_form()[2]
        return self.radii[0]

    def fs_area(self) -> float:
        """Fubini–Study area (volume pi for all of CP^1)."""
        if self.m != 1:
            raise ValueError("fs_area is implemented for m = 1")
        if self.kind == "whole":
            return math.pi
        if self.kind in ("euclidean_disk", "fs_cap"):
            return math.pi * math.sin(self.as_cap()[1]) ** 2
        c = self.center
        if self.kind == "annulus":
            inner, outer = (DomainSpec.disk(r, c).fs_area() for r in self.radii)
            return outer - inner
        return math.pi - DomainSpec.disk(self.radii[0], c).fs_area()

    def anchor(self) -> np.ndarray:
        """A homogeneous point inside the domain."""
        if self.kind == "complement":
            return ChartPoint.infinity(self.m).homogeneous()
        if self.kind == "annulus":
            c = self.center.coords[0]
            return np.array([1, c + 0.5 * sum(self.radii)], dtype=complex)
        return self.center.homogeneous()

    # ---------------------------- serialization ----------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "center": [[c.real, c.imag] for c in self.center.coords],
            "chart": self.center.chart,
            "radii": list(self.radii),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DomainSpec:
        center = data.get("center", [[0.0, 0.0]])
        if center and not isinstance(center[0], (list, tuple)):
            center = [center]
        coords = tuple(complex(re, im) for re, im in center)
        radii = data.get("radii", [data["radius"]] if "radius" in data else [])
        return cls(data["kind"], ChartPoint(int(data.get("chart", 0)), coords), radii)


def _point(center: complex | ChartPoint) -> ChartPoint:
    if isinstance(center, ChartPoint):
        return center
    value = complex(center)
    if not cmath.isfinite(value):
        raise ValueError(f"centre must be finite, got {center}")
    return ChartPoint(0, (value,))

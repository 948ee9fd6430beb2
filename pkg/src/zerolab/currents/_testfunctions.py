"""Smoothed indicators psi_1 <= chi_U <= psi_2 built from radial bumps."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Literal

import numpy as np

from zerolab.zeros import DomainSpec

if TYPE_CHECKING:
    from typing_extensions import TypeAlias

__all__ = ["RadialBump", "Side", "TestFunction", "smooth_indicator", "smoothstep"]

Side: TypeAlias = Literal["inner", "outer"]


def smoothstep(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quintic smoothstep S(x) = 10x^3 - 15x^4 + 6x^5 and its two derivatives.

    `x` is clipped to [0, 1]; S' and S'' vanish at both ends, so profiles
    built from S are C^2.
    """
    x = np.clip(x, 0.0, 1.0)
    s = x**3 * (10 - 15 * x + 6 * x**2)
    ds = 30 * x**2 * (1 - x) ** 2
    d2s = 60 * x * (1 - x) * (1 - 2 * x)
    return s, ds, d2s


@dataclass(frozen=True)
class RadialBump:
    """g(||z - c||) = S((b - rho) / w): 1 for rho <= b - w, 0 for rho >= b."""

    center: tuple[complex, ...]
    radius: float
    width: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(complex(c) for c in self.center))
        if not 0 < self.width < self.radius:
            raise ValueError(
                f"bump needs 0 < width < radius, got width={self.width}, "
                f"radius={self.radius}"
            )

    @property
    def m(self) -> int:
        return len(self.center)

    @property
    def inner_radius(self) -> float:
        return self.radius - self.width

    def _rho(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        diff = z - np.asarray(self.center)
        return diff, np.sqrt(np.sum(np.abs(diff) ** 2, axis=-1))

    def profile(self, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """g, g' and g'' as functions of the radius."""
        s, ds, d2s = smoothstep((self.radius - rho) / self.width)
        return s, -ds / self.width, d2s / self.width**2

    def values(self, z: np.ndarray) -> np.ndarray:
        return self.profile(self._rho(z)[1])[0]

    def gradient(self, z: np.ndarray) -> np.ndarray:
        diff, rho = self._rho(z)
        _, dg, _ = self.profile(rho)
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = np.where(rho[..., None] > 0, diff / rho[..., None], 0)
        return dg[..., None] * unit

    def laplacian(self, z: np.ndarray) -> np.ndarray:
        """g'' + (2m - 1) g' / rho, the Laplacian on R^{2m}."""
        _, rho = self._rho(z)
        _, dg, d2g = self.profile(rho)
        with np.errstate(invalid="ignore", divide="ignore"):
            radial = np.where(rho > 0, dg / rho, 0.0)
        return d2g + (2 * self.m - 1) * radial


@dataclass(frozen=True)
class TestFunction:
    """psi = constant + sum_i weight_i g_i with radial smoothstep bumps g_i.

    Points are chart-0 coordinates: a complex array ``(P,)`` for m = 1 or
    ``(P, m)``.  The `gradient` is returned in complex form
    ``d psi / dx + i d psi / dy`` per coordinate.
    """

    __test__ = False  # not a pytest class

    m: int = 1
    constant: float = 0.0
    terms: tuple[tuple[float, RadialBump], ...] = ()
    domain: DomainSpec | None = field(default=None, compare=False)
    width: float | None = field(default=None, compare=False)
    side: Side | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for _, bump in self.terms:
            if bump.m != self.m:
                raise ValueError(f"bump lives in C^{bump.m}, expected C^{self.m}")

    def _coords(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.m == 1 and (z.ndim == 0 or z.shape[-1] != 1):
            z = z[..., None]
        return z

    def values(self, z: np.ndarray) -> np.ndarray:
        z = self._coords(z)
        out = np.full(z.shape[:-1], self.constant, dtype=float)
        for weight, bump in self.terms:
            out += weight * bump.values(z)
        return out

    def gradient(self, z: np.ndarray) -> np.ndarray:
        z = self._coords(z)
        out = np.zeros(z.shape, dtype=complex)
        for weight, bump in self.terms:
            out += weight * bump.gradient(z)
        return out[..., 0] if self.m == 1 else out

    def laplacian(self, z: np.ndarray) -> np.ndarray:
        z = self._coords(z)
        out = np.zeros(z.shape[:-1], dtype=float)
        for weight, bump in self.terms:
            out += weight * bump.laplacian(z)
        return out

    def values_homogeneous(self, Z: np.ndarray) -> np.ndarray:
        """Values at homogeneous points; bumps vanish at Z_0 = 0."""
        Z = np.asarray(Z, dtype=complex)
        finite = Z[..., 0] != 0
        safe = np.where(finite[..., None], Z, 1)
        vals = self.values(safe[..., 1:] / safe[..., :1])
        return np.where(finite, vals, self.constant)

    def __add__(self, other: object) -> TestFunction:
        if isinstance(other, (int, float)):
            return replace(self, constant=self.constant + other, domain=None, side=None)
        if not isinstance(other, TestFunction):
            return NotImplemented
        if other.m != self.m:
            raise ValueError("cannot add test functions on different dimensions")
        constant = self.constant + other.constant
        return TestFunction(self.m, constant, self.terms + other.terms)

    __radd__ = __add__

    def __mul__(self, factor: object) -> TestFunction:
        if not isinstance(factor, (int, float)):
            return NotImplemented
        terms = tuple((factor * w, b) for w, b in self.terms)
        return TestFunction(self.m, factor * self.constant, terms)

    __rmul__ = __mul__

    def __neg__(self) -> TestFunction:
        return self * -1.0

    def __sub__(self, other: object) -> TestFunction:
        if isinstance(other, (int, float, TestFunction)):
            return self + (-other)
        return NotImplemented


def _disk_terms(
    center: tuple[complex, ...], r: float, w: float, side: Side
) -> tuple[tuple[float, RadialBump], ...]:
    b = r if side == "inner" else r + w
    return ((1.0, RadialBump(center, b, w)),)


def smooth_indicator(domain: DomainSpec, width: float, side: Side) -> TestFunction:
    """C^2 test function below (``inner``) or above (``outer``) chi_D.

    The transition collar of width `width` lies inside D for ``inner`` and
    outside D for ``outer``.

    Raises
    ------
    ValueError
        If `width` is not below the characteristic radius of `domain`, or a
        collar would reach the centre of a bump.
    """
    if side not in ("inner", "outer"):
        raise ValueError(f"side must be 'inner' or 'outer', got {side!r}")
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")
    m = domain.m
    meta = {"domain": domain, "width": width, "side": side}
    if domain.kind == "whole":
        return TestFunction(m, 1.0, (), **meta)
    if width >= domain.characteristic_radius():
        raise ValueError(
            f"smoothing width {width} is too large for {domain.kind} with "
            f"characteristic radius {domain.characteristic_radius():.4g}"
        )
    kind = domain.kind
    c = domain.center.coords
    radii = domain.radii
    if kind == "fs_cap":
        kind, cz, radius = domain.euclidean_form()
        c, radii = (cz,), (radius,)
    other: Side = "outer" if side == "inner" else "inner"
    try:
        if kind == "euclidean_disk":
            return TestFunction(m, 0.0, _disk_terms(c, radii[0], width, side), **meta)
        if kind == "complement":
            terms = _disk_terms(c, radii[0], width, other)
            return TestFunction(m, 1.0, tuple((-w, b) for w, b in terms), **meta)
        r_in, r_out = radii
        outer_terms = _disk_terms(c, r_out, width, side)
        hole = _disk_terms(c, r_in, width, other)
        terms = outer_terms + tuple((-w, b) for w, b in hole)
        return TestFunction(m, 0.0, terms, **meta)
    except ValueError as e:
        raise ValueError(f"smoothing width {width} is too large for {kind}: {e}") from e

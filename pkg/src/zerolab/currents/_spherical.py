"""Sphere averages: log^- of the Hermitian norm and Poisson integrals."""

from __future__ import annotations

import warnings
from typing import TYPE_CHECKING

import numpy as np

from zerolab._exceptions import QuadratureWarning
from zerolab.ensemble import log_norms
from zerolab.zeros import find_roots

from ._quadrature import NodeSet, QuadratureGrid, circle_nodes, integrate, sphere_nodes

if TYPE_CHECKING:
    from zerolab._chart import ChartPoint
    from zerolab.ensemble import PolySection
    from zerolab.zeros import RootSet

__all__ = ["poisson_kernel", "poisson_kernels", "poisson_mean", "sphere_log_minus"]

CONTOUR_TOL = 1e-9
RADIUS_MIN = 0.25
RADIUS_MAX = 3.0


def poisson_kernels(zeta: np.ndarray, z: np.ndarray, r: float) -> np.ndarray:
    """Vectorised ``r^{2m-2} (r^2 - ||zeta||^2) / ||zeta - z||^{2m}``.

    `zeta` has shape ``(m,)`` and `z` shape ``(P, m)``.
    """
    zeta = np.asarray(zeta, dtype=complex)
    z = np.asarray(z, dtype=complex)
    m = zeta.shape[-1]
    norm2 = float(np.sum(np.abs(zeta) ** 2))
    if norm2 >= r**2:
        raise ValueError(f"||zeta|| = {np.sqrt(norm2):.6g} must be below r = {r}")
    dist2 = np.sum(np.abs(z - zeta) ** 2, axis=-1)
    return r ** (2 * m - 2) * (r**2 - norm2) / dist2**m


def poisson_kernel(zeta: ChartPoint, z: ChartPoint, r: float) -> float:
    """Poisson kernel of the radius-r ball for the probability measure on its sphere.

    Raises
    ------
    ValueError
        If ``||zeta|| >= r`` or the points are not in chart 0.
    """
    if zeta.chart != 0 or z.chart != 0:
        raise ValueError("poisson_kernel expects chart-0 points")
    return float(poisson_kernels(np.array(zeta.coords), np.array([z.coords]), r)[0])


def _sphere(
    s: PolySection, r: float, quad: QuadratureGrid, roots: RootSet | None
) -> NodeSet:
    if s.m == 1:
        if roots is None:
            roots = find_roots(s)
        on_contour = np.abs(np.abs(roots.roots) - r) <= CONTOUR_TOL * max(1.0, r)
        if on_contour.any():
            warnings.warn(
                f"{int(on_contour.sum())} zero(s) lie on the circle |z| = {r}; "
                "the log singularity is integrated by local refinement",
                QuadratureWarning,
                stacklevel=3,
            )
        return circle_nodes(quad, 0j, r, roots.homogeneous())
    return sphere_nodes(quad, r, s.m)


def sphere_log_minus(
    s: PolySection,
    r: float,
    quad: QuadratureGrid | None = None,
    roots: RootSet | None = None,
    threads: int | None = None,
) -> float:
    """Average of ``log^- |s|_h = max(-log |s|_h, 0)`` over ``||z|| = r``.

    The measure is the invariant probability measure on the sphere.  For
    m = 1 the circle rule is refined around nearby zeros.

    Raises
    ------
    ValueError
        If `r` lies outside ``[RADIUS_MIN, RADIUS_MAX]``.
    """
    if not RADIUS_MIN <= r <= RADIUS_MAX:
        raise ValueError(f"radius must lie in [{RADIUS_MIN}, {RADIUS_MAX}], got {r}")
    quad = quad or QuadratureGrid()
    a = s.monomial_coefficients
    nodes = _sphere(s, r, quad, roots)

    def _log_minus(Z: np.ndarray) -> np.ndarray:
        return np.maximum(-log_norms(a, s.m, s.N, Z), 0.0)

    return integrate(_log_minus, nodes, threads)


def poisson_mean(
    s: PolySection,
    zeta: ChartPoint,
    r: float,
    quad: QuadratureGrid | None = None,
    roots: RootSet | None = None,
    threads: int | None = None,
) -> float:
    """``int P_r(zeta, z) log|f(z)| d sigma_r(z)``, the Poisson average of log|f|.

    By subharmonicity this is at least ``log|f(zeta)|``.
    """
    quad = quad or QuadratureGrid()
    a = s.monomial_coefficients
    center = np.array(zeta.to_chart(0).coords)
    nodes = _sphere(s, r, quad, roots)

    def _weighted(Z: np.ndarray) -> np.ndarray:
        sq = np.sum(np.abs(Z) ** 2, axis=-1)
        log_f = log_norms(a, s.m, s.N, Z) + 0.5 * s.N * np.log(sq)
        return poisson_kernels(center, Z[:, 1:], r) * log_f

    return integrate(_weighted, nodes, threads)

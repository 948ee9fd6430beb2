from __future__ import annotations

from itertools import combinations
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from zerolab._chart import ChartPoint

__all__ = [
    "covariance_entry",
    "fs_cosines",
    "fs_distance",
    "fs_distances",
    "p_kernel",
]


def fs_cosines(Z: np.ndarray, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of the Fubini–Study distance between homogeneous points.

    The sine comes from the Lagrange identity
    ``||Z||^2 ||W||^2 - |<Z, W>|^2 = sum_{i<j} |Z_i W_j - Z_j W_i|^2`` so that
    small distances keep full relative precision.
    """
    Z = np.asarray(Z, dtype=complex)
    W = np.asarray(W, dtype=complex)
    nz = np.sqrt(np.sum(np.abs(Z) ** 2, axis=-1))
    nw = np.sqrt(np.sum(np.abs(W) ** 2, axis=-1))
    inner = np.abs(np.sum(Z * W.conj(), axis=-1))
    wedge = sum(
        np.abs(Z[..., i] * W[..., j] - Z[..., j] * W[..., i]) ** 2
        for i, j in combinations(range(Z.shape[-1]), 2)
    )
    scale = nz * nw
    cos = np.clip(inner / scale, 0.0, 1.0)
    sin = np.clip(np.sqrt(wedge) / scale, 0.0, 1.0)
    return cos, sin


def fs_distances(Z: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Vectorised FS geodesic distance in [0, pi/2] between homogeneous points."""
    cos, sin = fs_cosines(Z, W)
    return np.arctan2(sin, cos)


def fs_distance(z: ChartPoint, w: ChartPoint) -> float:
    """Geodesic distance of omega = (i/2) d dbar log(1 + ||z||^2).

    Equals ``arccos(|1 + z.w*| / sqrt((1 + ||z||^2)(1 + ||w||^2)))`` in chart 0
    and is computed from homogeneous coordinates, so the points may live in
    different charts.
    """
    if z.m != w.m:
        raise ValueError(f"points live in CP^{z.m} and CP^{w.m}")
    return float(fs_distances(z.homogeneous(), w.homogeneous()))


def p_kernel(z: ChartPoint, w: ChartPoint, N: int) -> float:
    """Normalized Szegő kernel P_N(z, w) = cos^N(dist(z, w))."""
    if z.m != w.m:
        raise ValueError(f"points live in CP^{z.m} and CP^{w.m}")
    cos, _ = fs_cosines(z.homogeneous(), w.homogeneous())
    return float(cos**N)


def covariance_entry(z: ChartPoint, w: ChartPoint, N: int) -> complex:
    """E xi_z conj(xi_w) for the canonical chart-0 frame.

    ``(1 + z.w*)^N / ((1 + ||z||^2)^{N/2} (1 + ||w||^2)^{N/2})``; its modulus
    is `p_kernel`.
    """
    if z.chart != 0 or w.chart != 0:
        raise ValueError("covariance_entry expects chart-0 points")
    Z = z.homogeneous()
    W = w.homogeneous()
    q = np.vdot(W, Z) / np.sqrt(np.vdot(Z, Z).real * np.vdot(W, W).real)
    return complex(q**N)

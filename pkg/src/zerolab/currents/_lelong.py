"""Log-modulus integrals and Poincaré–Lelong linear statistics.

For m = 1 the zero divisor of s is paired with a test function through

    int_Z psi = (N / pi) int psi dVol + (1 / 2 pi) int Lap(psi) log|s|_h dA,

so zero counts come out of quadrature without locating any root.  For m = 2
the Euclidean form ``(1 / 2 pi) int Lap(psi) log|f| dV`` gives the
psi-weighted Euclidean area of the zero curve.
"""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Callable, NamedTuple

import numpy as np

from zerolab._chart import ChartPoint
from zerolab._exceptions import QuadratureError
from zerolab.ensemble import log_norms, normalization
from zerolab.zeros import DomainSpec, RootSet, find_roots

from ._quadrature import (
    NodeSet,
    QuadratureGrid,
    QuadratureResult,
    ball_shell_nodes,
    integrate,
    manifold_nodes,
    polar_nodes,
    refined_manifold_nodes,
)
from ._testfunctions import TestFunction, smooth_indicator

if TYPE_CHECKING:
    from zerolab.ensemble import PolySection

__all__ = [
    "LogIntegrals",
    "integrate_log_modulus",
    "log_modulus_quadrature",
    "nevanlinna_bracket",
    "pl_linear_statistic",
    "pl_quadrature",
    "volume_sandwich",
]

logger = logging.getLogger(__name__)


class LogIntegrals(NamedTuple):
    signed: float
    absolute: float


def _singular_points(s: PolySection, roots: RootSet | None) -> np.ndarray | None:
    if s.m != 1:
        return None
    if roots is None:
        roots = find_roots(s)
    return roots.homogeneous()


def _log_section(
    s: PolySection, normalized: bool
) -> Callable[[np.ndarray], np.ndarray]:
    a = s.monomial_coefficients
    offset = math.log(normalization(s.m, s.N)) if normalized else 0.0

    def _log(Z: np.ndarray) -> np.ndarray:
        return log_norms(a, s.m, s.N, Z) + offset

    return _log


def _log_chart(s: PolySection) -> Callable[[np.ndarray], np.ndarray]:
    # log|f(z)| at Z = (1, z)
    a = s.monomial_coefficients

    def _log(Z: np.ndarray) -> np.ndarray:
        sq = np.sum(np.abs(Z) ** 2, axis=-1)
        return log_norms(a, s.m, s.N, Z) + 0.5 * s.N * np.log(sq)

    return _log


def _checked(
    scheme: str, cells: int, depth: int, fine: float, coarse: float, tol: float
) -> QuadratureResult:
    error = abs(fine - coarse)
    if not math.isfinite(fine) or error > tol * max(1.0, abs(fine)):
        raise QuadratureError(
            f"successive refinements differ by {error:.3g} "
            f"(estimate {fine:.6g}, tolerance {tol:g})"
        )
    return QuadratureResult(scheme, cells, depth, fine, error)


def log_modulus_quadrature(
    s: PolySection,
    quad: QuadratureGrid | None = None,
    roots: RootSet | None = None,
    normalized: bool = False,
    threads: int | None = None,
) -> tuple[QuadratureResult, QuadratureResult]:
    """Diagnostics-carrying form of `integrate_log_modulus`."""
    quad = quad or QuadratureGrid()
    if s.m not in (1, 2):
        raise ValueError(f"log-modulus integrals support m in {{1, 2}}, got {s.m}")
    singular = _singular_points(s, roots)
    log_s = _log_section(s, normalized)

    def _nodes(q: QuadratureGrid) -> NodeSet:
        if s.m == 1:
            return refined_manifold_nodes(q, singular)
        return manifold_nodes(q, 2)

    fine, coarse = _nodes(quad), _nodes(quad.coarsened())
    out = []
    for func in (log_s, lambda Z: np.abs(log_s(Z))):
        hi = integrate(func, fine, threads)
        lo = integrate(func, coarse, threads)
        out.append(_checked(quad.scheme, fine.cells, fine.depth, hi, lo, quad.tol))
    return out[0], out[1]


def integrate_log_modulus(
    s: PolySection,
    quad: QuadratureGrid | None = None,
    roots: RootSet | None = None,
    normalized: bool = False,
    threads: int | None = None,
) -> LogIntegrals:
    """``(int log|s|_h dVol, int |log|s|_h| dVol)`` over all of CP^m.

    The Hermitian norm is the raw one unless `normalized`, in which case the
    factor sqrt(Pi_N) of the orthonormal basis is included.  For m = 1 the
    quadrature is refined around the zeros (computed when `roots` is not
    given).

    Raises
    ------
    QuadratureError
        If the estimate differs from the one on the coarsened grid by more
        than ``quad.tol`` (relative).
    """
    signed, absolute = log_modulus_quadrature(s, quad, roots, normalized, threads)
    return LogIntegrals(signed.estimate, absolute.estimate)


def _pl_value(
    s: PolySection,
    psi: TestFunction,
    quad: QuadratureGrid,
    singular: np.ndarray | None,
    threads: int | None,
) -> tuple[float, int, int]:
    N = s.N
    cells = depth = 0
    if s.m == 1:
        total = 0.0
        if psi.constant:
            # Lap(const) = 0, so only the volume term survives
            whole = manifold_nodes(quad, 1)
            volume = integrate(lambda Z: np.ones(Z.shape[0]), whole, threads)
            total += psi.constant * N / math.pi * volume
            cells += whole.cells
        log_s = _log_section(s, normalized=False)
        for weight, bump in psi.terms:
            c, b, w = bump.center[0], bump.radius, bump.width
            core = DomainSpec.disk(b - w, c).fs_area()
            fs = polar_nodes(quad, c, b - w, b, "fs")
            collar = integrate(lambda Z, g=bump: g.values(Z[:, 1:]), fs, threads)
            nodes = polar_nodes(quad, c, b - w, b, "euclidean", singular)
            lap = integrate(
                lambda Z, g=bump: g.laplacian(Z[:, 1:]) * log_s(Z), nodes, threads
            )
            total += weight * (N / math.pi * (core + collar) + lap / (2 * math.pi))
            cells += nodes.cells
            depth = max(depth, nodes.depth)
        return total, cells, depth
    if psi.constant:
        raise ValueError("a nonzero constant has infinite Euclidean area for m = 2")
    total = 0.0
    log_f = _log_chart(s)
    for weight, bump in psi.terms:
        nodes = ball_shell_nodes(quad, bump.center, bump.inner_radius, bump.radius)
        lap = integrate(
            lambda Z, g=bump: g.laplacian(Z[:, 1:]) * log_f(Z), nodes, threads
        )
        total += weight * lap / (2 * math.pi)
        cells += nodes.cells
    return total, cells, depth


def pl_quadrature(
    s: PolySection,
    psi: TestFunction,
    quad: QuadratureGrid | None = None,
    roots: RootSet | None = None,
    threads: int | None = None,
) -> QuadratureResult:
    """Diagnostics-carrying form of `pl_linear_statistic`."""
    quad = quad or QuadratureGrid()
    if s.m not in (1, 2) or psi.m != s.m:
        raise ValueError(f"test function on C^{psi.m} does not match m = {s.m}")
    singular = _singular_points(s, roots)
    fine, cells, depth = _pl_value(s, psi, quad, singular, threads)
    coarse, _, _ = _pl_value(s, psi, quad.coarsened(), singular, threads)
    return _checked(quad.scheme, cells, depth, fine, coarse, quad.tol)


def pl_linear_statistic(
    s: PolySection,
    psi: TestFunction,
    quad: QuadratureGrid | None = None,
    roots: RootSet | None = None,
    threads: int | None = None,
) -> float:
    """Quadrature value of the zero-divisor pairing int_{Z_s} psi.

    For m = 1 this equals the sum of psi over the zeros; for m = 2 it is the
    psi-weighted Euclidean area of the zero curve.  `roots` (m = 1) only
    steer the local refinement of the quadrature.
    """
    return pl_quadrature(s, psi, quad, roots, threads).estimate


def volume_sandwich(
    s: PolySection,
    domain: DomainSpec,
    width: float,
    quad: QuadratureGrid | None = None,
    roots: RootSet | None = None,
    threads: int | None = None,
) -> tuple[float, float]:
    """``(pl(psi_inner), pl(psi_outer))``, bracketing the zero volume in D."""
    if s.m == 1 and roots is None:
        roots = find_roots(s)
    lower = pl_linear_statistic(
        s, smooth_indicator(domain, width, "inner"), quad, roots, threads
    )
    upper = pl_linear_statistic(
        s, smooth_indicator(domain, width, "outer"), quad, roots, threads
    )
    logger.debug("volume sandwich for %s: [%.6g, %.6g]", domain.kind, lower, upper)
    return lower, upper


def nevanlinna_bracket(
    s: PolySection,
    r: float,
    width: float | None = None,
    quad: QuadratureGrid | None = None,
    roots: RootSet | None = None,
) -> tuple[float, float]:
    """Bracket of the normalized zero volume in the centred ball of radius r.

    The volume is divided by ``pi^{m-1} r^{2m-2} / (m-1)!`` (1 for m = 1 and
    ``pi r^2`` for m = 2), whose expectation is ``N r^2 / (1 + r^2)``.
    """
    width = 0.1 * r if width is None else width
    domain = DomainSpec("euclidean_disk", ChartPoint(0, (0j,) * s.m), (r,))
    lower, upper = volume_sandwich(s, domain, width, quad, roots)
    scale = math.pi ** (s.m - 1) * r ** (2 * s.m - 2) / math.factorial(s.m - 1)
    return lower / scale, upper / scale

"""Quadrature over CP^m, log-modulus integrals and Poincaré–Lelong statistics."""

from ._lelong import (
    LogIntegrals,
    integrate_log_modulus,
    log_modulus_quadrature,
    nevanlinna_bracket,
    pl_linear_statistic,
    pl_quadrature,
    volume_sandwich,
)
from ._quadrature import (
    MAX_NODES,
    NodeSet,
    QuadratureGrid,
    QuadratureResult,
    ball_shell_nodes,
    circle_nodes,
    integrate,
    manifold_nodes,
    manifold_volume,
    polar_nodes,
    refined_manifold_nodes,
    sphere_nodes,
)
from ._spherical import poisson_kernel, poisson_kernels, poisson_mean, sphere_log_minus
from ._testfunctions import RadialBump, TestFunction, smooth_indicator, smoothstep

__all__ = [
    "MAX_NODES",
    "LogIntegrals",
    "NodeSet",
    "QuadratureGrid",
    "QuadratureResult",
    "RadialBump",
    "TestFunction",
    "ball_shell_nodes",
    "circle_nodes",
    "integrate",
    "integrate_log_modulus",
    "log_modulus_quadrature",
    "manifold_nodes",
    "manifold_volume",
    "nevanlinna_bracket",
    "pl_linear_statistic",
    "pl_quadrature",
    "poisson_kernel",
    "poisson_kernels",
    "poisson_mean",
    "refined_manifold_nodes",
    "smooth_indicator",
    "smoothstep",
    "sphere_log_minus",
    "sphere_nodes",
    "volume_sandwich",
]

"""Tensor-product quadrature on CP^m, on spheres and on polar chart patches.

Every rule is a `NodeSet`: homogeneous points plus weights.  Domains are
parametrized by boxes in a parameter space (e.g. ``u = sin^2 dist(0, z)`` and
an angle on CP^1), each box carries a tensor Gauss–Legendre (or midpoint)
rule, and boxes near known singular points are split dyadically.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace
from typing import TYPE_CHECKING, Any, Callable, Literal

import numpy as np

from zerolab.kernel import fs_cosines
from zerolab.utils import ordered_map

if TYPE_CHECKING:
    from collections.abc import Sequence

    from typing_extensions import TypeAlias

__all__ = [
    "NodeSet",
    "QuadratureGrid",
    "QuadratureResult",
    "ball_shell_nodes",
    "cell_nodes",
    "circle_nodes",
    "integrate",
    "manifold_nodes",
    "manifold_volume",
    "polar_map",
    "polar_nodes",
    "refined_manifold_nodes",
    "sphere_nodes",
]

logger = logging.getLogger(__name__)

Scheme: TypeAlias = Literal["gauss_legendre", "midpoint"]
ParamMap: TypeAlias = Callable[[np.ndarray], "tuple[np.ndarray, np.ndarray]"]

MAX_NODES = 4_000_000
_CHUNK = 65_536


@dataclass(frozen=True)
class QuadratureGrid:
    """Resolution parameters shared by all quadratures.

    Parameters
    ----------
    scheme : {"gauss_legendre", "midpoint"}
        Rule used inside every cell.
    order : int
        Gauss–Legendre nodes per cell and axis (ignored by ``midpoint``).
    radial_cells : int
        Cells along radial-type axes (``u``, ``rho``, simplex coordinates).
    angular_points : int
        Nodes along each angle (trapezoid rule on full circles; split into
        ``angular_points // order`` cells on refinable grids).
    split_radius : float
        Chart radius |z| at which the CP^1 grid has a cell edge.
    refine_depth : int
        Levels of dyadic refinement around singular points.
    refine_reach : float
        Cells within this many cell widths of a singular point are split.
    tol : float
        Relative tolerance between successive refinements.
    """

    scheme: Scheme = "gauss_legendre"
    order: int = 6
    radial_cells: int = 8
    angular_points: int = 256
    split_radius: float = 1.0
    refine_depth: int = 6
    refine_reach: float = 3.0
    tol: float = 1e-2

    def __post_init__(self) -> None:
        if self.scheme not in ("gauss_legendre", "midpoint"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        for name in ("order", "radial_cells", "angular_points"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.refine_depth < 0:
            raise ValueError(f"refine_depth must be >= 0, got {self.refine_depth}")
        if not self.split_radius > 0:
            raise ValueError(f"split_radius must be positive, got {self.split_radius}")

    @property
    def nodes_per_cell(self) -> int:
        return 1 if self.scheme == "midpoint" else self.order

    @property
    def angular_cells(self) -> int:
        return max(1, self.angular_points // self.nodes_per_cell)

    def coarsened(self) -> QuadratureGrid:
        """The previous level of refinement, for successive-difference checks."""
        return replace(
            self,
            radial_cells=max(1, self.radial_cells // 2),
            angular_points=max(1, self.angular_points // 2),
            refine_depth=max(0, self.refine_depth - 1),
        )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> QuadratureGrid:
        return cls(**data)


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Quadrature nodes as homogeneous points with weights."""

    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    cells: int = 0
    depth: int = 0

    def __len__(self) -> int:
        return int(self.weights.shape[0])

    def chart_coords(self) -> np.ndarray:
        """Chart-0 coordinates ``(P, m)``; nodes must avoid Z_0 = 0."""
        return self.points[:, 1:] / self.points[:, :1]


@dataclass(frozen=True)
class QuadratureResult:
    """An integral together with its diagnostics."""

    scheme: str
    cells: int
    refinement_depth: int
    estimate: float
    error_estimate: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        """``{scheme, cells, refinement_depth, estimate, error_estimate}``."""
        return json.dumps(self.to_dict())


# ------------------------------- 1-d rules -------------------------------


def _rule(quad: QuadratureGrid) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1] for a single cell."""
    if quad.scheme == "midpoint":
        return np.array([0.5]), np.array([1.0])
    x, w = np.polynomial.legendre.leggauss(quad.order)
    return 0.5 * (x + 1), 0.5 * w


def _trapezoid(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Offset periodic trapezoid rule on [0, 2 pi) with weights summing to 2 pi."""
    theta = 2 * np.pi * (np.arange(n) + 0.5) / n
    return theta, np.full(n, 2 * np.pi / n)


def _composite(
    edges: np.ndarray, quad: QuadratureGrid
) -> tuple[np.ndarray, np.ndarray]:
    x, w = _rule(quad)
    width = np.diff(edges)
    nodes = (edges[:-1, None] + width[:, None] * x[None, :]).ravel()
    weights = (width[:, None] * w[None, :]).ravel()
    return nodes, weights


def _u_edges(quad: QuadratureGrid) -> np.ndarray:
    # cell edge at u(R) = R^2 / (1 + R^2)
    u_split = quad.split_radius**2 / (1 + quad.split_radius**2)
    below = max(1, quad.radial_cells // 2)
    above = max(1, quad.radial_cells - below)
    return np.concatenate(
        [np.linspace(0, u_split, below + 1), np.linspace(u_split, 1, above + 1)[1:]]
    )


def _check_size(n: int) -> None:
    if n > MAX_NODES:
        raise ValueError(
            f"quadrature would use {n} nodes (limit {MAX_NODES}); "
            "lower order, radial_cells or angular_points"
        )


# ------------------------------ fixed grids ------------------------------


def manifold_nodes(quad: QuadratureGrid, m: int = 1) -> NodeSet:
    """Nodes for integrating over all of CP^m with dVol = omega^m / m!.

    Points are written as ``Z = (sqrt(u_0), sqrt(u_1) e^{i t_1}, ...)`` with
    ``(u_0, ..., u_m)`` on the simplex; in these coordinates
    ``dVol = du dt / 2^m``, so the weights add up to pi^m / m!.
    """
    if m not in (1, 2):
        raise ValueError(f"manifold quadrature supports m in {{1, 2}}, got {m}")
    theta, wt = _trapezoid(quad.angular_points)
    if m == 1:
        u, wu = _composite(_u_edges(quad), quad)
        _check_size(u.size * theta.size)
        U, T = np.meshgrid(u, theta, indexing="ij")
        Z = np.stack([np.sqrt(1 - U), np.sqrt(U) * np.exp(1j * T)], -1)
        W = np.outer(wu, wt) / 2
        return NodeSet(Z.reshape(-1, 2), W.ravel(), cells=quad.radial_cells)
    x, wx = _composite(np.linspace(0, 1, quad.radial_cells + 1), quad)
    _check_size(x.size**2 * theta.size**2)
    A, B, T1, T2 = np.meshgrid(x, x, theta, theta, indexing="ij")
    # square -> simplex: u1 = a, u2 = (1 - a) b with Jacobian (1 - a)
    u1 = A
    u2 = (1 - A) * B
    u0 = np.clip(1 - u1 - u2, 0, None)
    Z = np.stack(
        [
            np.sqrt(u0) + 0j,
            np.sqrt(u1) * np.exp(1j * T1),
            np.sqrt(u2) * np.exp(1j * T2),
        ],
        -1,
    )
    W = (
        wx[:, None, None, None]
        * wx[None, :, None, None]
        * wt[None, None, :, None]
        * wt[None, None, None, :]
        * (1 - A)
        / 4
    )
    return NodeSet(Z.reshape(-1, 3), W.ravel(), cells=quad.radial_cells**2)


def manifold_volume(quad: QuadratureGrid, m: int = 1) -> float:
    """Sum of the manifold weights; pi for CP^1 and pi^2 / 2 for CP^2."""
    return float(np.sum(manifold_nodes(quad, m).weights))


def sphere_nodes(
    quad: QuadratureGrid, r: float, m: int = 1, center: Sequence[complex] | None = None
) -> NodeSet:
    """Invariant probability measure on the sphere ``||z - c|| = r`` in chart 0."""
    if r <= 0:
        raise ValueError(f"sphere radius must be positive, got {r}")
    c = np.zeros(m, dtype=complex) if center is None else np.asarray(center, complex)
    theta, wt = _trapezoid(quad.angular_points)
    if m == 1:
        z = c[0] + r * np.exp(1j * theta)
        Z = np.column_stack([np.ones_like(z), z])
        return NodeSet(Z, wt / (2 * np.pi), cells=quad.angular_points)
    if m != 2:
        raise ValueError(f"sphere quadrature supports m in {{1, 2}}, got {m}")
    v, wv = _composite(np.linspace(0, 1, quad.radial_cells + 1), quad)
    _check_size(v.size * theta.size**2)
    V, T1, T2 = np.meshgrid(v, theta, theta, indexing="ij")
    z1 = c[0] + r * np.sqrt(V) * np.exp(1j * T1)
    z2 = c[1] + r * np.sqrt(1 - V) * np.exp(1j * T2)
    Z = np.stack([np.ones_like(z1), z1, z2], -1).reshape(-1, 3)
    W = (wv[:, None, None] * wt[None, :, None] * wt[None, None, :]) / (4 * np.pi**2)
    return NodeSet(Z, W.ravel(), cells=quad.radial_cells)


def ball_shell_nodes(
    quad: QuadratureGrid, center: Sequence[complex], r0: float, r1: float
) -> NodeSet:
    """Euclidean volume nodes on the shell ``r0 < ||z - c|| < r1`` in C^2."""
    if not 0 <= r0 < r1:
        raise ValueError(f"need 0 <= r0 < r1, got {r0}, {r1}")
    c = np.asarray(center, dtype=complex)
    rho, wr = _composite(np.linspace(r0, r1, quad.radial_cells + 1), quad)
    v, wv = _composite(np.linspace(0, 1, quad.radial_cells + 1), quad)
    theta, wt = _trapezoid(quad.angular_points)
    _check_size(rho.size * v.size * theta.size**2)
    R, V, T1, T2 = np.meshgrid(rho, v, theta, theta, indexing="ij")
    z1 = c[0] + R * np.sqrt(V) * np.exp(1j * T1)
    z2 = c[1] + R * np.sqrt(1 - V) * np.exp(1j * T2)
    Z = np.stack([np.ones_like(z1), z1, z2], -1).reshape(-1, 3)
    # dV = rho^3 d rho dv dt1 dt2 / 2
    W = (
        (wr * rho**3)[:, None, None, None]
        * wv[None, :, None, None]
        * wt[None, None, :, None]
        * wt[None, None, None, :]
        / 2
    )
    return NodeSet(Z, W.ravel(), cells=quad.radial_cells**2)


# ---------------------------- refinable grids ----------------------------


def _boxes(edges: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    lows = [e[:-1] for e in edges]
    highs = [e[1:] for e in edges]
    lo = np.array(list(itertools.product(*lows)), dtype=float)
    hi = np.array(list(itertools.product(*highs)), dtype=float)
    return lo, hi


def _split(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mid = 0.5 * (lo + hi)
    los, his = [], []
    for mask in itertools.product((False, True), repeat=lo.shape[1]):
        upper = np.array(mask)
        los.append(np.where(upper, mid, lo))
        his.append(np.where(upper, hi, mid))
    return np.concatenate(los), np.concatenate(his)


def _near(
    lo: np.ndarray,
    hi: np.ndarray,
    param_map: ParamMap,
    singular: np.ndarray,
    reach: float,
) -> np.ndarray:
    n = lo.shape[1]
    center, _ = param_map(0.5 * (lo + hi))
    radius = np.zeros(lo.shape[0])
    for mask in itertools.product((False, True), repeat=n):
        corner, _ = param_map(np.where(np.array(mask), hi, lo))
        radius = np.maximum(radius, fs_cosines(center, corner)[1])
    _, sin = fs_cosines(center[:, None, :], singular[None, :, :])
    return np.min(sin, axis=1) <= (1 + 2 * reach) * radius


def _box_nodes(
    lo: np.ndarray, hi: np.ndarray, quad: QuadratureGrid, param_map: ParamMap
) -> tuple[np.ndarray, np.ndarray]:
    x, w = _rule(quad)
    n = lo.shape[1]
    idx = np.array(list(itertools.product(range(x.size), repeat=n)))
    X = x[idx]
    W = np.prod(w[idx], axis=1)
    params = lo[:, None, :] + (hi - lo)[:, None, :] * X[None, :, :]
    vol = np.prod(hi - lo, axis=1)
    _check_size(params.shape[0] * params.shape[1])
    Z, jac = param_map(params.reshape(-1, n))
    return Z, (vol[:, None] * W[None, :]).ravel() * jac


def cell_nodes(
    quad: QuadratureGrid,
    param_map: ParamMap,
    edges: Sequence[np.ndarray],
    singular: np.ndarray | None = None,
) -> NodeSet:
    """Tensor rule on the boxes spanned by `edges`, refined near `singular`.

    Parameters
    ----------
    param_map : callable
        Maps a ``(P, n)`` array of parameters to homogeneous points and the
        Jacobian of the measure.
    edges : sequence of arrays
        Cell edges along each of the n parameter axes.
    singular : array, optional
        ``(S, m + 1)`` homogeneous points; cells within `quad.refine_reach`
        cell widths of one of them are split ``quad.refine_depth`` times.
    """
    lo, hi = _boxes(edges)
    leaves_lo, leaves_hi = [], []
    depth = 0
    if singular is not None and len(singular):
        for _ in range(quad.refine_depth):
            if not lo.size:
                break
            near = _near(lo, hi, param_map, singular, quad.refine_reach)
            if not near.any():
                break
            leaves_lo.append(lo[~near])
            leaves_hi.append(hi[~near])
            lo, hi = _split(lo[near], hi[near])
            depth += 1
    leaves_lo.append(lo)
    leaves_hi.append(hi)
    lo, hi = np.concatenate(leaves_lo), np.concatenate(leaves_hi)
    Z, weights = _box_nodes(lo, hi, quad, param_map)
    logger.debug(
        "cell quadrature: %d cells, depth %d, %d nodes",
        lo.shape[0],
        depth,
        weights.size,
    )
    return NodeSet(Z, weights, cells=int(lo.shape[0]), depth=depth)


def _sphere_map(params: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u, theta = params[:, 0], params[:, 1]
    Z = np.column_stack([np.sqrt(1 - u) + 0j, np.sqrt(u) * np.exp(1j * theta)])
    return Z, np.full(u.shape, 0.5)


def polar_map(center: complex, measure: Literal["euclidean", "fs"]) -> ParamMap:
    """``(rho, theta) -> c + rho e^{i theta}`` with dA or FS dVol Jacobian."""

    def _map(params: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rho, theta = params[:, 0], params[:, 1]
        z = center + rho * np.exp(1j * theta)
        Z = np.column_stack([np.ones_like(z), z])
        jac = rho if measure == "euclidean" else rho / (1 + np.abs(z) ** 2) ** 2
        return Z, jac

    return _map


def refined_manifold_nodes(
    quad: QuadratureGrid, singular: np.ndarray | None = None
) -> NodeSet:
    """CP^1 nodes on ``(u, theta)`` cells, refined around `singular` points."""
    theta_edges = np.linspace(0, 2 * np.pi, quad.angular_cells + 1)
    return cell_nodes(quad, _sphere_map, [_u_edges(quad), theta_edges], singular)


def polar_nodes(
    quad: QuadratureGrid,
    center: complex,
    r0: float,
    r1: float,
    measure: Literal["euclidean", "fs"] = "euclidean",
    singular: np.ndarray | None = None,
) -> NodeSet:
    """Nodes on the chart-0 annulus ``r0 < |z - c| < r1``."""
    if not 0 <= r0 < r1:
        raise ValueError(f"need 0 <= r0 < r1, got {r0}, {r1}")
    edges = [
        np.linspace(r0, r1, quad.radial_cells + 1),
        np.linspace(0, 2 * np.pi, quad.angular_cells + 1),
    ]
    return cell_nodes(quad, polar_map(center, measure), edges, singular)


def circle_nodes(
    quad: QuadratureGrid, center: complex, r: float, singular: np.ndarray | None = None
) -> NodeSet:
    """Probability measure d theta / 2 pi on ``|z - c| = r``, refined near roots."""

    def _map(params: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = center + r * np.exp(1j * params[:, 0])
        return np.column_stack([np.ones_like(z), z]), np.full(z.shape, 1 / (2 * np.pi))

    edges = [np.linspace(0, 2 * np.pi, quad.angular_cells + 1)]
    return cell_nodes(quad, _map, edges, singular)


# ------------------------------ integration ------------------------------


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    nodes: NodeSet,
    threads: int | None = None,
) -> float:
    """Sum of ``func(points) * weights`` over the nodes.

    Chunks are evaluated on a thread pool and reduced in a fixed order, so
    the result does not depend on the thread count.
    """
    starts = range(0, len(nodes), _CHUNK)

    def _partial(i: int) -> float:
        sl = slice(i, i + _CHUNK)
        return float(np.sum(func(nodes.points[sl]) * nodes.weights[sl]))

    partials = ordered_map(_partial, starts, threads)
    return math.fsum(partials)

"""Checks that the monomial basis is orthonormal and its pointwise sum constant."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from zerolab._chart import ChartPoint, as_homogeneous, unit_polydisc
from zerolab._exceptions import QuadratureError

from ._evaluate import monomials
from ._spec import exponent_matrix, log_multinomial, szego_diagonal

if TYPE_CHECKING:
    from collections.abc import Sequence

    from zerolab.currents import QuadratureGrid

__all__ = ["basis_sum", "gram_matrix", "orthonormality_defect"]


def basis_sum(
    m: int, N: int, points: ChartPoint | Sequence[ChartPoint] | np.ndarray
) -> np.ndarray:
    """Sum over the orthonormal basis of |S_J|^2_{h^N} at each point.

    By the multinomial theorem the result is the constant
    `szego_diagonal(m, N)` everywhere; this evaluates the sum term by term so
    the identity can be checked numerically.

    Parameters
    ----------
    m, N : int
        Dimension and degree.
    points : ChartPoint, sequence of ChartPoint, or array
        Points, or a ``(P, m + 1)`` array of homogeneous coordinates.
    """
    if isinstance(points, ChartPoint):
        Z = points.homogeneous()[None]
    elif isinstance(points, np.ndarray):
        Z = points
    else:
        Z = as_homogeneous(points)
    Z = unit_polydisc(Z)
    sq = np.abs(Z) ** 2
    E = exponent_matrix(m, N)
    # real power table of |Z_k|^2
    pows = np.concatenate(
        [np.ones((*sq.shape, 1)), np.cumprod(np.repeat(sq[..., None], N, -1), -1)],
        axis=-1,
    )
    terms = np.ones((Z.shape[0], E.shape[0]))
    for k in range(m + 1):
        terms *= pows[:, k, :][:, E[:, k]]
    weights = np.exp(log_multinomial(m, N))
    total = terms @ weights / np.sum(sq, axis=-1) ** N
    return szego_diagonal(m, N) * total


def gram_matrix(m: int, N: int, quad: QuadratureGrid) -> np.ndarray:
    """Quadrature approximation of <S_J, S_K> for all basis pairs."""
    from zerolab.currents import manifold_nodes

    nodes = manifold_nodes(quad, m)
    # nodes lie on the unit sphere of C^{m+1}, so Z^{E_J} is already normalized
    V = monomials(m, N, nodes.points) * np.exp(0.5 * log_multinomial(m, N))
    G = (V.T * nodes.weights) @ V.conj()
    return szego_diagonal(m, N) * G


def orthonormality_defect(m: int, N: int, quad: QuadratureGrid) -> float:
    """max_{J,K} |<S_J, S_K> - delta_JK| by quadrature.

    Raises
    ------
    QuadratureError
        If the Gram matrix quadrature is not finite.
    """
    if m not in (1, 2):
        raise ValueError(f"orthonormality_defect supports m in {{1, 2}}, got {m}")
    G = gram_matrix(m, N, quad)
    if not np.all(np.isfinite(G)):
        raise QuadratureError("Gram matrix quadrature produced non-finite values")
    return float(np.max(np.abs(G - np.eye(G.shape[0]))))

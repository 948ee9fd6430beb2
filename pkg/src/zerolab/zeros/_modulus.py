"""Maximum of the Hermitian norm |s|_{h^N} over a domain of CP^1.

A coarse grid of spacing ``pi / (4 sqrt(N))`` (in FS distance) covers the
sphere; the best grid point is then refined a fixed number of times on a 9x9
local patch whose spacing shrinks by 4 per level.  Everything is
deterministic, so repeated runs return identical values.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from zerolab.ensemble import normalization, norms, weighted_coefficients

if TYPE_CHECKING:
    from zerolab.ensemble import PolySection

    from ._domains import DomainSpec

__all__ = ["DEFAULT_LEVELS", "max_modulus", "max_modulus_batch", "sphere_grid"]

DEFAULT_LEVELS = 4
_PATCH = np.arange(-4, 5)
_OFFSETS = (_PATCH[:, None] + 1j * _PATCH[None, :]).ravel()


def sphere_grid(spacing: float) -> np.ndarray:
    """Unit homogeneous points covering CP^1 with FS spacing about `spacing`.

    Rings sit at FS distance ``k * spacing`` from 0; each ring is split into
    arcs of FS length at most `spacing` (the ring has length
    ``2 pi sin(phi) cos(phi)``).
    """
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    rings = math.ceil((math.pi / 2) / spacing)
    rows = []
    for k in range(rings + 1):
        phi = min(k * spacing, math.pi / 2)
        n = max(1, math.ceil(2 * math.pi * math.sin(phi) * math.cos(phi) / spacing))
        theta = 2 * np.pi * (np.arange(n) + 0.5 * (k % 2)) / n
        rows.append(
            np.column_stack(
                [
                    np.full(n, math.cos(phi), dtype=complex),
                    math.sin(phi) * np.exp(1j * theta),
                ]
            )
        )
    return np.vstack(rows)


def _local_patch(centers: np.ndarray, spacing: float) -> np.ndarray:
    # U maps (1, 0) to the centre p; (1, u) / |(1, u)| lies at FS distance ~|u|
    u = spacing * _OFFSETS
    p0, p1 = centers[:, 0, None], centers[:, 1, None]
    Z = np.stack([p0 - np.conj(p1) * u, p1 + np.conj(p0) * u], axis=-1)
    return Z / np.sqrt(1 + np.abs(u) ** 2)[None, :, None]


def _maximize(a: np.ndarray, N: int, domain: DomainSpec, levels: int) -> np.ndarray:
    T = a.shape[0]
    h = math.pi / (4 * math.sqrt(max(N, 1)))
    grid = sphere_grid(h)
    grid = grid[domain.contains(grid)]
    if grid.shape[0] == 0:
        grid = domain.anchor()[None, :]
        grid = grid / np.linalg.norm(grid)
    values = norms(a, 1, N, grid)
    idx = np.argmax(values, axis=1)
    best = values[np.arange(T), idx]
    where = grid[idx]
    spacing = h
    for _ in range(levels):
        spacing /= 4
        patch = _local_patch(where, spacing)
        vals = np.where(domain.contains(patch), norms(a, 1, N, patch), -np.inf)
        j = np.argmax(vals, axis=1)
        cand = vals[np.arange(T), j]
        better = cand > best
        best = np.where(better, cand, best)
        where = np.where(better[:, None], patch[np.arange(T), j], where)
    return best


def max_modulus(
    s: PolySection,
    domain: DomainSpec,
    levels: int = DEFAULT_LEVELS,
    normalized: bool = False,
) -> float:
    """sup over `domain` of |s|_{h^N}.

    With ``normalized=True`` the value includes the factor
    ``gamma = sqrt(Pi_N)`` of the orthonormal basis.
    """
    if s.m != 1:
        raise ValueError(f"max_modulus needs m = 1, got m = {s.m}")
    value = float(_maximize(s.monomial_coefficients[None], s.N, domain, levels)[0])
    return value * normalization(1, s.N) if normalized else value


def max_modulus_batch(
    coeffs: np.ndarray, N: int, domain: DomainSpec, levels: int = DEFAULT_LEVELS
) -> np.ndarray:
    """Raw maxima for a ``(T, N + 1)`` batch of coefficient vectors."""
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    return _maximize(weighted_coefficients(coeffs, 1, N), N, domain, levels)

"""Batched Aberth–Ehrlich iteration for univariate polynomials.

Each polynomial is evaluated in whichever chart keeps the Horner argument in
the closed unit disk: ``p(z)`` for ``|z| <= 1`` and the reversed polynomial
``q(w) = w^d p(1/w)`` otherwise, so high degrees never overflow.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = ["AberthResult", "aberth", "backward_errors", "newton_polish"]

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
_TINY = 1e-300


class AberthResult(NamedTuple):
    roots: np.ndarray  # (T, d)
    converged: np.ndarray  # (T,) bool
    iterations: int


def _horner_with_derivative(
    a: np.ndarray, t: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    # a: (T, n), t: (T, P)
    p = np.broadcast_to(a[:, -1, None], t.shape).astype(complex)
    dp = np.zeros_like(p)
    for j in range(a.shape[1] - 2, -1, -1):
        dp = dp * t + p
        p = p * t + a[:, j, None]
    return p, dp


def _chart_split(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    inside = np.abs(z) <= 1
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(inside, z, 1.0 / z)
    return inside, t


def newton_ratios(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z) / p'(z) computed in the better-conditioned chart."""
    d = a.shape[1] - 1
    inside, t = _chart_split(z)
    p, dp = _horner_with_derivative(a, t)
    q, dq = _horner_with_derivative(a[:, ::-1], t)
    with np.errstate(divide="ignore", invalid="ignore"):
        fwd = p / dp
        # p(z) = z^d q(w), p'(z) = z^{d-1} (d q - w q'), w = 1/z
        bwd = z * q / (d * q - t * dq)
    return np.where(inside, fwd, bwd)


def backward_errors(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Normwise backward error |p(z)| / sum_j |a_j| |z|^j in the better chart."""
    inside, t = _chart_split(z)
    abs_a = np.abs(a)
    fwd = np.abs(_horner_with_derivative(a, t)[0])
    bwd = np.abs(_horner_with_derivative(a[:, ::-1], t)[0])
    fwd_scale = _horner_with_derivative(abs_a, np.abs(t))[0].real
    bwd_scale = _horner_with_derivative(abs_a[:, ::-1], np.abs(t))[0].real
    num = np.where(inside, fwd, bwd)
    den = np.where(inside, fwd_scale, bwd_scale)
    return num / np.maximum(den, _TINY)


def initial_guesses(
    a: np.ndarray, attempt: int = 0, radius_scale: float = 1.0
) -> np.ndarray:
    """Points on the circle of radius |a_0 / a_d|^{1/d}, rotated by the golden angle."""
    d = a.shape[1] - 1
    radius = (np.abs(a[:, 0]) / np.abs(a[:, -1])) ** (1.0 / d) * radius_scale
    angles = 2 * np.pi * np.arange(d) / d + 0.4 + GOLDEN_ANGLE * attempt
    return radius[:, None] * np.exp(1j * angles)[None, :]


def aberth(
    a: np.ndarray,
    z0: np.ndarray | None = None,
    max_iter: int = 200,
    tol: float = 1e-13,
) -> AberthResult:
    """Run simultaneous Aberth–Ehrlich iterations on a batch of polynomials.

    Parameters
    ----------
    a : np.ndarray
        ``(T, d + 1)`` coefficients in ascending order with nonzero first and
        last entries.
    z0 : np.ndarray, optional
        ``(T, d)`` starting points; by default `initial_guesses`.
    max_iter : int
        Iteration cap per batch.
    tol : float
        A row has converged once every correction satisfies
        ``|w| <= tol * |z|``.
    """
    a = np.asarray(a, dtype=complex)
    z = initial_guesses(a) if z0 is None else np.array(z0, dtype=complex)
    T, d = z.shape
    active = np.ones(T, dtype=bool)
    eye = np.eye(d, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        rows = np.flatnonzero(active)
        za = z[rows]
        ratio = newton_ratios(a[rows], za)
        diff = za[:, :, None] - za[:, None, :]
        diff[:, eye] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            repulsion = np.sum(1.0 / diff, axis=2)
            denom = 1.0 - ratio * repulsion
            step = np.where(denom != 0, ratio / denom, ratio)
        step = np.where(np.isfinite(step), step, 0.0)
        z[rows] = za - step
        done = np.all(np.abs(step) <= tol * np.abs(z[rows]) + _TINY, axis=1)
        active[rows[done]] = False
        if not active.any():
            break
    converged = ~active & np.all(np.isfinite(z), axis=1)
    return AberthResult(z, converged, it)


def newton_polish(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    """One Newton step per root in each chart, keeping the best candidate.

    Only roots in the seam band ``0.5 < |z| < 2`` are touched, where neither
    chart is clearly preferable.
    """
    seam = (np.abs(z) > 0.5) & (np.abs(z) < 2.0)
    if not seam.any():
        return z
    pad = np.where(seam, z, 0.5)
    # chart 0 step
    p, dp = _horner_with_derivative(a, pad)
    with np.errstate(divide="ignore", invalid="ignore"):
        z_fwd = pad - p / dp
        w = 1.0 / pad
        q, dq = _horner_with_derivative(a[:, ::-1], w)
        z_bwd = 1.0 / (w - q / dq)
    candidates = np.stack([pad, z_fwd, z_bwd])
    errors = np.stack([_safe_errors(a, c) for c in candidates])
    best = np.argmin(errors, axis=0)
    chosen = np.take_along_axis(candidates, best[None], axis=0)[0]
    out = z.copy()
    out[seam] = chosen[seam]
    return out


def _safe_errors(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    finite = np.isfinite(c)
    errs = backward_errors(a, np.where(finite, c, 1.0))
    return np.where(finite, errs, np.inf)

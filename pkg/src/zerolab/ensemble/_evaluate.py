"""Vectorised evaluation of sections on homogeneous coordinates.

All routines accept coefficients of shape ``(d,)`` (one section) or
``(T, d)`` (a batch), and homogeneous points of shape ``(P, m + 1)`` (shared
by the batch) or ``(T, P, m + 1)`` (one point set per section).  Results have
shape ``(P,)`` or ``(T, P)``.
"""

from __future__ import annotations

import numpy as np

from zerolab._chart import unit_polydisc

from ._spec import exponent_matrix, log_multinomial

__all__ = [
    "horner",
    "monomials",
    "log_norms",
    "monomial_values",
    "norms",
    "weighted_coefficients",
]

_CHUNK = 8192


def weighted_coefficients(coeffs: np.ndarray, m: int, N: int) -> np.ndarray:
    """Multiply c_J by sqrt(N choose J), along the last axis."""
    return np.asarray(coeffs, dtype=complex) * np.exp(0.5 * log_multinomial(m, N))


def horner(a: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Evaluate sum_j a[..., j] t^j by Horner's rule.

    `a` is ``(n,)`` or ``(T, n)``; `t` is ``(P,)`` or ``(T, P)``.
    """
    a = np.asarray(a)
    t = np.asarray(t)
    if a.ndim == 1:
        acc = np.full(t.shape, a[-1], dtype=complex)
        for j in range(a.shape[-1] - 2, -1, -1):
            acc = acc * t + a[j]
        return acc
    acc = np.broadcast_to(a[:, -1, None], np.broadcast_shapes((a.shape[0], 1), t.shape))
    acc = acc.astype(complex)
    for j in range(a.shape[-1] - 2, -1, -1):
        acc = acc * t + a[:, j, None]
    return acc


def _powers(Z: np.ndarray, N: int) -> np.ndarray:
    # (..., m+1, N+1) table of Z_k^e built by repeated multiplication
    rep = np.repeat(Z[..., None], N, axis=-1)
    ones = np.ones((*Z.shape, 1), dtype=complex)
    return np.concatenate([ones, np.cumprod(rep, axis=-1)], axis=-1)


def _form_chunk(a: np.ndarray, E: np.ndarray, Z: np.ndarray, N: int) -> np.ndarray:
    pows = _powers(Z, N)
    mono = np.ones((*Z.shape[:-1], E.shape[0]), dtype=complex)
    for k in range(E.shape[1]):
        mono *= pows[..., k, :][..., E[:, k]]
    if a.ndim == 1:
        return mono @ a
    if Z.ndim == 2:
        return (mono @ a.T).T
    return np.einsum("tpd,td->tp", mono, a)


def monomial_values(a: np.ndarray, m: int, N: int, Z: np.ndarray) -> np.ndarray:
    """The homogeneous form F(Z) = sum_J a_J Z_0^{N-|J|} Z^J at the given points.

    No rescaling is applied; pass coordinates in the unit polydisc to avoid
    overflow.
    """
    a = np.asarray(a, dtype=complex)
    Z = np.asarray(Z, dtype=complex)
    if Z.shape[-1] != m + 1:
        raise ValueError(f"expected homogeneous points with {m + 1} entries")
    if m == 1:
        Z0, Z1 = Z[..., 0], Z[..., 1]
        inside = np.abs(Z1) <= np.abs(Z0)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(inside, Z1 / Z0, Z0 / Z1)
            lead = np.where(inside, Z0, Z1) ** N
        fwd = horner(a, t)
        bwd = horner(a[..., ::-1], t)
        return np.where(inside, fwd, bwd) * lead
    E = exponent_matrix(m, N)
    n_pts = Z.shape[-2]
    parts = [
        _form_chunk(a, E, Z[..., i : i + _CHUNK, :], N)
        for i in range(0, n_pts, _CHUNK)
    ]
    return np.concatenate(parts, axis=-1)


def log_norms(a: np.ndarray, m: int, N: int, Z: np.ndarray) -> np.ndarray:
    """log(|F(Z)| / ||Z||^N): the log of the raw Hermitian norm.

    Exact zeros give ``-inf``.
    """
    a = np.asarray(a, dtype=complex)
    Z = unit_polydisc(Z)
    with np.errstate(divide="ignore", invalid="ignore"):
        if m == 1:
            Z0, Z1 = Z[..., 0], Z[..., 1]
            inside = np.abs(Z1) <= np.abs(Z0)
            t = np.where(inside, Z1 / Z0, Z0 / Z1)
            val = np.where(inside, horner(a, t), horner(a[..., ::-1], t))
            return np.log(np.abs(val)) - 0.5 * N * np.log1p(np.abs(t) ** 2)
        F = monomial_values(a, m, N, Z)
        sq = np.sum(np.abs(Z) ** 2, axis=-1)
        return np.log(np.abs(F)) - 0.5 * N * np.log(sq)


def norms(a: np.ndarray, m: int, N: int, Z: np.ndarray) -> np.ndarray:
    """|F(Z)| / ||Z||^N, the chart-independent raw Hermitian norm."""
    return np.exp(log_norms(a, m, N, Z))


def monomials(m: int, N: int, Z: np.ndarray) -> np.ndarray:
    """Matrix of homogeneous monomials Z^{E_J}, shape ``(..., d_N)``."""
    Z = np.asarray(Z, dtype=complex)
    E = exponent_matrix(m, N)
    pows = _powers(Z, N)
    mono = np.ones((*Z.shape[:-1], E.shape[0]), dtype=complex)
    for k in range(E.shape[1]):
        mono *= pows[..., k, :][..., E[:, k]]
    return mono

"""Analytic lower bound for the hole probability and its sampling witness.

Pick a section sigma of O(1) with sup |sigma|_h = 1 that does not vanish on
the closure of U, and let S_1 = sigma^N / ||sigma^N|| head an orthonormal
basis.  If |c_1| > 1 and |c_j| < t_N for j >= 2 then s has no zero in U, so
the hole probability is at least ``e^{-1} (t_N^2 / 2)^{d_N - 1}``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from zerolab._chart import ChartPoint
from zerolab._exceptions import QuadratureError
from zerolab.currents import QuadratureGrid, integrate, manifold_nodes
from zerolab.ensemble import keyed_uniforms, log_multinomial, normalization
from zerolab.kernel import fs_cosines
from zerolab.zeros import DomainSpec, count_in_domain, find_roots_batch

__all__ = [
    "HoleLowerBound",
    "adapted_basis",
    "bound_consistency",
    "hole_lower_bound",
    "sigma_center",
    "sigma_power_norm",
    "witness_sections",
]

logger = logging.getLogger(__name__)

WITNESS_STREAM = 1


@dataclass(frozen=True)
class HoleLowerBound:
    """``bound = exp(log_bound)``; `witness_ok` is None when not sampled."""

    N: int
    a: float
    b: float
    t_N: float
    log_bound: float
    witness_ok: bool | None = None
    witness_trials: int = 0

    @property
    def bound(self) -> float:
        return math.exp(self.log_bound)


def sigma_center(domain: DomainSpec) -> tuple[ChartPoint, float]:
    """Peak point p of sigma (|sigma|_h = cos dist(., p)) and a = -log inf_U |sigma|_h.

    Disks and annuli use the constant section (p = 0), for which
    ``a = log(1 + r_far^2) / 2`` with r_far the largest |z| on U; caps use
    the section peaked at the cap centre, giving ``a = -log cos(alpha)``.

    Raises
    ------
    ValueError
        If U contains the zero of sigma.
    """
    if domain.m != 1:
        raise ValueError("the hole lower bound is implemented for m = 1")
    if domain.kind in ("euclidean_disk", "annulus"):
        r_far = abs(domain.center.coords[0]) + domain.radii[-1]
        return ChartPoint.at(0), 0.5 * math.log1p(r_far**2)
    if domain.kind == "fs_cap":
        return domain.center, -math.log(math.cos(domain.radii[0]))
    raise ValueError(
        f"a {domain.kind} domain contains the zero of the constant section; "
        "use a disk, annulus or FS cap (the section is rotated to the cap centre)"
    )


def _sigma_vector(N: int, center: ChartPoint) -> np.ndarray:
    # coefficients of sigma_p^N = <Z, P>^N in the orthonormal monomial basis
    P = center.homogeneous().conj()
    P = P / np.linalg.norm(P)
    j = np.arange(N + 1)
    binom = np.exp(0.5 * log_multinomial(1, N))
    return binom * P[0] ** (N - j) * P[1] ** j / normalization(1, N)


def sigma_power_norm(
    N: int, center: ChartPoint | None = None, quad: QuadratureGrid | None = None
) -> float:
    """L^2 norm of sigma_p^N, i.e. sqrt(int cos^{2N} dist(., p) dVol).

    The closed form is ``sqrt(pi / (N + 1))``; with `quad` the integral is
    evaluated numerically instead.
    """
    if quad is None:
        return math.sqrt(math.pi / (N + 1))
    P = (center or ChartPoint.at(0)).homogeneous()
    nodes = manifold_nodes(quad, 1)
    value = integrate(lambda Z: fs_cosines(Z, P)[0] ** (2 * N), nodes)
    return math.sqrt(value)


def adapted_basis(
    N: int, center: ChartPoint | None = None, quad: QuadratureGrid | None = None
) -> np.ndarray:
    """Unitary ``(N + 1, N + 1)`` matrix whose columns are S_1, ..., S_d.

    Columns are expressed in the orthonormal monomial basis; the first is
    sigma^N / ||sigma^N|| and the rest complete it by a QR factorisation.
    """
    center = center or ChartPoint.at(0)
    v = _sigma_vector(N, center)
    if quad is not None:
        numeric = sigma_power_norm(N, center, quad)
        if abs(numeric - np.linalg.norm(v)) > 1e-8 * numeric:
            raise QuadratureError(
                f"||sigma^N|| by quadrature ({numeric:.12g}) disagrees with the "
                f"coefficient norm ({np.linalg.norm(v):.12g})"
            )
    k = int(np.argmax(np.abs(v)))
    others = [e for e in range(N + 1) if e != k]
    A = np.column_stack([v, np.eye(N + 1, dtype=complex)[:, others]])
    Q, R = np.linalg.qr(A)
    Q[:, 0] *= R[0, 0] / abs(R[0, 0])
    return Q


def witness_sections(
    N: int,
    t_N: float,
    trials: int,
    master_seed: int = 0,
    basis: np.ndarray | None = None,
) -> np.ndarray:
    """Raw coefficient vectors conditioned on |c_1| > 1 and |c_j| < t_N.

    |c|^2 is Exp(1): given |c_1|^2 > 1 it is 1 + Exp(1), and given
    |c_j| < t it follows the truncated exponential, sampled by inversion.
    """
    d = N + 1
    Q = adapted_basis(N) if basis is None else basis
    rows = []
    for trial in range(trials):
        u = keyed_uniforms(master_seed, trial, 2 * d, stream=WITNESS_STREAM)
        mod2 = -np.log(1 - u[0::2] * (-math.expm1(-(t_N**2))))
        mod2[0] = 1 - math.log(u[0])
        c = np.sqrt(mod2) * np.exp(2j * np.pi * u[1::2])
        rows.append(c)
    C = np.array(rows)
    # s = sum c_j S_j = gamma * sum (Q c)_J sqrt(binom) z^J in raw coordinates
    return (C @ Q.T) * normalization(1, N)


def hole_lower_bound(
    domain: DomainSpec,
    N: int,
    witness_samples: int = 0,
    master_seed: int = 0,
    quad: QuadratureGrid | None = None,
) -> HoleLowerBound:
    """Lower bound on P(no zero in U) and an optional sampled witness check.

    ``b = Vol(CP^1)^{-1/2} = pi^{-1/2}``,
    ``t_N = b e^{-a N} / (N^{1/2} sqrt(d_N))`` and the bound is
    ``e^{-1} (t_N^2 / 2)^{d_N - 1}``.  The witness draws conditioned sections
    and checks that none has a zero in U.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    center, a = sigma_center(domain)
    d = N + 1
    b = 1 / math.sqrt(math.pi)
    log_t = math.log(b) - a * N - 0.5 * math.log(N) - 0.5 * math.log(d)
    t_N = math.exp(log_t)
    log_bound = -1.0 + (d - 1) * (2 * log_t - math.log(2))
    ok: bool | None = None
    if witness_samples:
        basis = adapted_basis(N, center, quad)
        coeffs = witness_sections(N, t_N, witness_samples, master_seed, basis)
        counts = [count_in_domain(r, domain) for r in find_roots_batch(coeffs, N)]
        ok = all(c == 0 for c in counts)
        if not ok:
            logger.warning(
                "hole witness failed for %d of %d conditioned sections at N=%d",
                sum(c > 0 for c in counts),
                witness_samples,
                N,
            )
    return HoleLowerBound(N, a, b, t_N, log_bound, ok, witness_samples)



def bound_consistency(
    bound: float, p_hat: float, ci_low: float, ci_high: float
) -> bool | None:
    """Compare a lower bound against an estimate ``p_hat`` in ``[ci_low, ci_high]``.

    The bound must not exceed ``p_hat - (ci_high - ci_low)``, i.e. p_hat less
    two half-widths.  A bound above p_hat is inconsistent outright.  Returns
    None (inconclusive) when p_hat is 0 or the margin leaves nothing above 0.
    """
    if p_hat <= 0:
        return None
    if bound > p_hat:
        return False
    margin = p_hat - (ci_high - ci_low)
    if margin <= 0:
        return None
    return bound <= margin

from __future__ import annotations

import csv
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from zerolab._chart import ChartPoint
from zerolab._exceptions import ConvergenceError
from zerolab.ensemble import PolySection, monomial_values, weighted_coefficients

if TYPE_CHECKING:
    from os import PathLike

__all__ = [
    "CovMatrix",
    "Lattice",
    "build_lattice",
    "coherent_values",
    "covariance_matrix",
    "min_eigenvalue",
    "minimal_spacing",
    "row_sum_max",
    "whiten",
]

logger = logging.getLogger(__name__)

DEFAULT_CAP = 20_000
EIGENVALUE_FLOOR = 1e-8


@dataclass(frozen=True, eq=False)
class Lattice:
    """Coherent-state lattice z0 + (a / sqrt(N)) nu, |nu_j| <= floor(t sqrt(N) / a).

    `indices` holds the integer 2m-tuples nu as rows ``(Re nu_1, Im nu_1, ...)``
    and `coords` the corresponding chart-0 coordinates, shape ``(n, m)``.
    """

    center: ChartPoint
    t: float
    a: float
    N: int
    indices: np.ndarray = field(repr=False)
    coords: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return self.center.m

    @property
    def n(self) -> int:
        return int(self.indices.shape[0])

    @property
    def half_width(self) -> int:
        """K = floor(t sqrt(N) / a)."""
        return int(np.max(np.abs(self.indices))) if self.n else 0

    @property
    def spacing(self) -> float:
        """Nearest-neighbour chart spacing a / sqrt(N)."""
        return self.a / math.sqrt(self.N)

    @property
    def points(self) -> tuple[ChartPoint, ...]:
        return tuple(ChartPoint(0, tuple(row)) for row in self.coords.tolist())

    def homogeneous(self) -> np.ndarray:
        """``(n, m + 1)`` homogeneous coordinates of the lattice points."""
        return np.column_stack([np.ones(self.n, dtype=complex), self.coords])

    def to_csv(self, path: str | PathLike[str]) -> None:
        """Write one row per point: index tuple, then Re/Im of each coordinate."""
        header = [f"nu{k}" for k in range(2 * self.m)]
        for k in range(self.m):
            header += [f"re{k}", f"im{k}"]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for nu, z in zip(self.indices.tolist(), self.coords.tolist()):
                row = list(nu)
                for c in z:
                    row += [repr(c.real), repr(c.imag)]
                writer.writerow(row)


def build_lattice(
    z0: ChartPoint,
    t: float,
    a: float,
    N: int,
    m: int | None = None,
    cap: int = DEFAULT_CAP,
    max_half_width: float = 0.5,
) -> Lattice:
    """Build the lattice of coherent-state centres around `z0`.

    Parameters
    ----------
    z0 : ChartPoint
        Centre; converted to chart 0.
    t : float
        Box half-width in chart units, at most `max_half_width`.
    a : float
        Spacing parameter; neighbours are a / sqrt(N) apart.
    N : int
        Degree.
    m : int, optional
        Dimension; must agree with `z0` when given.
    cap : int
        Maximum number of points (the covariance matrix is dense).
    max_half_width : float
        Upper bound on t keeping chart and geodesic distances comparable.
    """
    if m is not None and m != z0.m:
        raise ValueError(f"m={m} does not match the centre's dimension {z0.m}")
    if t <= 0 or a <= 0:
        raise ValueError(f"t and a must be positive, got t={t}, a={a}")
    if t > max_half_width:
        raise ValueError(f"t={t} exceeds the allowed half-width {max_half_width}")
    ratio = t * math.sqrt(N) / a
    if ratio < 1 - 1e-12:
        raise ValueError(f"t*sqrt(N)/a must be >= 1, got {ratio:.6g}")
    K = math.floor(ratio + 1e-12)
    m = z0.m
    n = (2 * K + 1) ** (2 * m)
    if n > cap:
        raise ValueError(f"lattice would have {n} points, above the cap of {cap}")
    center = z0.to_chart(0)
    nu = np.array(
        list(itertools.product(range(-K, K + 1), repeat=2 * m)), dtype=np.int64
    )
    offsets = (nu[:, 0::2] + 1j * nu[:, 1::2]) * (a / math.sqrt(N))
    coords = np.asarray(center.coords, dtype=complex)[None, :] + offsets
    nu.setflags(write=False)
    coords.setflags(write=False)
    return Lattice(center, float(t), float(a), int(N), nu, coords)


@dataclass(frozen=True, eq=False)
class CovMatrix:
    """Hermitian covariance Delta_{mu nu} = E xi_mu conj(xi_nu) with unit diagonal."""

    matrix: np.ndarray = field(repr=False)
    N: int

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    def to_csv(self, path: str | PathLike[str]) -> None:
        """Write ``mu, nu, re, im`` rows."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["mu", "nu", "re", "im"])
            for (mu, nu), v in np.ndenumerate(self.matrix):
                writer.writerow([mu, nu, repr(v.real), repr(v.imag)])


def covariance_matrix(lattice: Lattice) -> CovMatrix:
    """Covariance of the coherent-state values on `lattice`."""
    Z = lattice.homogeneous()
    norms = np.sqrt(np.sum(np.abs(Z) ** 2, axis=1))
    q = (Z @ Z.conj().T) / np.outer(norms, norms)
    upper = np.triu(q**lattice.N, k=1)
    delta = upper + upper.conj().T + np.eye(lattice.n, dtype=complex)
    delta.setflags(write=False)
    return CovMatrix(delta, lattice.N)


def _as_matrix(delta: CovMatrix | np.ndarray) -> np.ndarray:
    return delta.matrix if isinstance(delta, CovMatrix) else np.asarray(delta)


def row_sum_max(delta: CovMatrix | np.ndarray) -> float:
    """max_mu sum_{nu != mu} |Delta_{mu nu}|."""
    mat = np.abs(_as_matrix(delta))
    if mat.shape[0] < 2:
        return 0.0
    off = mat.sum(axis=1) - np.diag(mat)
    return float(off.max())


def _eigh(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(mat)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"Hermitian eigensolver failed: {e}") from e


def min_eigenvalue(delta: CovMatrix | np.ndarray) -> float:
    """Smallest eigenvalue via LAPACK's Hermitian solver."""
    mat = _as_matrix(delta)
    try:
        vals = np.linalg.eigvalsh(mat)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"Hermitian eigensolver failed: {e}") from e
    return float(vals[0])


def whiten(
    xi: np.ndarray, delta: CovMatrix | np.ndarray, floor: float = EIGENVALUE_FLOOR
) -> np.ndarray:
    """Return zeta = Delta^{-1/2} xi with the Hermitian spectral square root.

    `xi` may be a single vector of length n or a ``(T, n)`` batch of row
    vectors.
    """
    mat = _as_matrix(delta)
    xi = np.asarray(xi, dtype=complex)
    if xi.shape[-1] != mat.shape[0]:
        raise ValueError(f"xi has length {xi.shape[-1]}, expected {mat.shape[0]}")
    vals, vecs = _eigh(mat)
    if vals[0] <= floor:
        raise ValueError(
            f"covariance is not safely positive definite: "
            f"min eigenvalue {vals[0]:.3g} <= {floor:g}"
        )
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    return xi @ inv_sqrt.T


def coherent_values(s: PolySection | np.ndarray, lattice: Lattice) -> np.ndarray:
    """xi_nu = f(z_nu) (1 + ||z_nu||^2)^{-N/2} in the canonical chart-0 frame.

    `s` is a section or a ``(T, d_N)`` batch of raw coefficients of degree
    ``lattice.N``; the result has shape ``(n,)`` or ``(T, n)``.
    """
    if isinstance(s, PolySection):
        if s.N != lattice.N or s.m != lattice.m:
            raise ValueError("section and lattice disagree on (m, N)")
        a = s.monomial_coefficients
    else:
        a = weighted_coefficients(np.asarray(s), lattice.m, lattice.N)
    Z = lattice.homogeneous()
    Z = Z / np.sqrt(np.sum(np.abs(Z) ** 2, axis=1))[:, None]
    return monomial_values(a, lattice.m, lattice.N, Z)


def minimal_spacing(
    z0: ChartPoint,
    t: float,
    N: int,
    bound: float = 0.5,
    start: float = 1.0,
    step: float = 0.1,
) -> float:
    """Smallest a on the grid start, start + step, ... with row_sum_max <= bound.

    The scan stops once t sqrt(N) / a < 1 (a single-point lattice).
    """
    k = 0
    while True:
        a = round(start + k * step, 10)
        if t * math.sqrt(N) / a < 1 - 1e-12:
            break
        if row_sum_max(covariance_matrix(build_lattice(z0, t, a, N))) <= bound:
            logger.debug("minimal spacing a=%s for N=%d, t=%s", a, N, t)
            return a
        k += 1
    raise ValueError(f"no spacing a >= {start} meets row sum <= {bound} at N={N}")

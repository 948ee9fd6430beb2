from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from zerolab._chart import ChartPoint
from zerolab._exceptions import ConvergenceError, RootSolverWarning
from zerolab.ensemble import PolySection, weighted_coefficients

from ._aberth import aberth, backward_errors, initial_guesses, newton_polish

if TYPE_CHECKING:
    from os import PathLike

__all__ = ["RootSet", "find_roots", "find_roots_batch"]

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
BATCH_CHUNK = 256
_RETRIES = ((1, 1.0), (2, 0.5), (3, 2.0))


@dataclass(frozen=True, eq=False)
class RootSet:
    """The N zeros of a section on CP^1, with multiplicity.

    Finite zeros are stored by their chart-0 coordinate; zeros at infinity
    (where the top coefficient vanishes) are only counted.
    """

    N: int
    roots: np.ndarray = field(repr=False)
    at_infinity: int = 0
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)

    def __post_init__(self) -> None:
        if self.roots.size + self.at_infinity != self.N:
            raise ValueError(
                f"{self.roots.size} finite + {self.at_infinity} infinite zeros "
                f"!= degree {self.N}"
            )

    def __len__(self) -> int:
        return self.N

    @property
    def points(self) -> tuple[ChartPoint, ...]:
        finite = tuple(ChartPoint(0, (complex(z),)) for z in self.roots)
        return finite + (ChartPoint.infinity(),) * self.at_infinity

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    def homogeneous(self) -> np.ndarray:
        """``(N, 2)`` unit homogeneous coordinates of all zeros."""
        Z = np.column_stack([np.ones_like(self.roots), self.roots])
        Z /= np.sqrt(1 + np.abs(self.roots) ** 2)[:, None]
        inf = np.tile(np.array([0, 1], dtype=complex), (self.at_infinity, 1))
        return np.vstack([Z, inf])

    def to_csv(self, path: str | PathLike[str]) -> None:
        """Write ``chart, re, im, residual`` rows, one per zero."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["chart", "re", "im", "residual"])
            for z, r in zip(self.roots.tolist(), self.residuals.tolist()):
                writer.writerow([0, repr(z.real), repr(z.imag), repr(r)])
            for _ in range(self.at_infinity):
                writer.writerow([1, "0.0", "0.0", "0.0"])


def _solve_dense(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Roots and backward errors of a batch ``(T, d + 1)`` with a_0, a_d != 0."""
    d = a.shape[1] - 1
    if d == 1:
        z = -a[:, :1] / a[:, 1:]
        return z, backward_errors(a, z)
    result = aberth(a)
    z, ok = result.roots, result.converged
    for attempt, scale in _RETRIES:
        if ok.all():
            break
        bad = np.flatnonzero(~ok)
        warnings.warn(
            f"Aberth iteration stalled for {bad.size} polynomial(s); "
            f"retrying with rotated start {attempt}",
            RootSolverWarning,
            stacklevel=3,
        )
        z0 = initial_guesses(a[bad], attempt=attempt, radius_scale=scale)
        retry = aberth(a[bad], z0=z0)
        z[bad] = retry.roots
        ok[bad] = retry.converged
    for row in np.flatnonzero(~ok):
        warnings.warn(
            "falling back to companion-matrix eigenvalues",
            RootSolverWarning,
            stacklevel=3,
        )
        z[row] = np.roots(a[row, ::-1])
    z = newton_polish(a, z)
    return z, backward_errors(a, z)


def _strip(a: np.ndarray) -> tuple[np.ndarray, int, int]:
    nz = np.flatnonzero(a)
    if nz.size == 0:
        raise ValueError("the zero section has no well-defined zero set")
    low, high = int(nz[0]), int(nz[-1])
    return a[low : high + 1], low, a.size - 1 - high


def _assemble(
    N: int, z: np.ndarray, res: np.ndarray, at_zero: int, at_inf: int
) -> RootSet:
    finite = np.isfinite(z)
    if not finite.all():
        # a root escaped to infinity numerically; it is one there
        at_inf += int(np.count_nonzero(~finite))
        z, res = z[finite], res[finite]
    if res.size and res.max() > RESIDUAL_TOL:
        raise ConvergenceError(
            f"root certification failed: backward error {res.max():.3g} "
            f"> {RESIDUAL_TOL:g}"
        )
    roots = np.concatenate([np.zeros(at_zero, dtype=complex), z])
    residuals = np.concatenate([np.zeros(at_zero), res])
    roots.setflags(write=False)
    residuals.setflags(write=False)
    return RootSet(N, roots, at_inf, residuals)


def _roots_of_weighted(a: np.ndarray, N: int) -> RootSet:
    core, at_zero, at_inf = _strip(a)
    if core.size == 1:
        return _assemble(N, np.zeros(0, complex), np.zeros(0), at_zero, at_inf)
    z, res = _solve_dense(core[None, :])
    return _assemble(N, z[0], res[0], at_zero, at_inf)


def find_roots(s: PolySection) -> RootSet:
    """All N zeros of a section on CP^1, including those at infinity.

    Raises
    ------
    ValueError
        If ``s.m != 1`` or the section is identically zero.
    ConvergenceError
        If a root cannot be certified to backward error 1e-8.
    """
    if s.m != 1:
        raise ValueError(f"find_roots needs m = 1, got m = {s.m}")
    return _roots_of_weighted(s.monomial_coefficients, s.N)


def find_roots_batch(coeffs: np.ndarray, N: int) -> list[RootSet]:
    """Zeros of a ``(T, N + 1)`` batch of raw coefficient vectors.

    Rows whose extreme coefficients are nonzero (almost surely all of them)
    are solved together in chunks; the rest go through `find_roots`.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    if coeffs.shape[1] != N + 1:
        raise ValueError(
            f"expected {N + 1} coefficients per row, got {coeffs.shape[1]}"
        )
    a = weighted_coefficients(coeffs, 1, N)
    out: list[RootSet | None] = [None] * a.shape[0]
    generic = (a[:, 0] != 0) & (a[:, -1] != 0)
    for row in np.flatnonzero(~generic):
        out[row] = _roots_of_weighted(a[row], N)
    rows = np.flatnonzero(generic)
    for start in range(0, rows.size, BATCH_CHUNK):
        chunk = rows[start : start + BATCH_CHUNK]
        z, res = _solve_dense(a[chunk])
        for i, row in enumerate(chunk):
            out[row] = _assemble(N, z[i], res[i], 0, 0)
    logger.debug("solved %d polynomials of degree %d", len(out), N)
    return [r for r in out if r is not None]

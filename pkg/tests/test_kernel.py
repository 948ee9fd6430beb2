import math

import numpy as np
import pytest

from zerolab import ChartPoint, EnsembleSpec, sample_section
from zerolab.ensemble import hermitian_norm, sample_coefficients, weighted_coefficients
from zerolab.kernel import (
    build_lattice,
    coherent_values,
    covariance_entry,
    covariance_matrix,
    decay_profile,
    decay_regimes,
    fs_distance,
    min_eigenvalue,
    minimal_spacing,
    p_kernel,
    row_sum_max,
    whiten,
)

ORIGIN = ChartPoint.at(0)


def test_fs_distance():
    assert fs_distance(ORIGIN, ChartPoint.at(1)) == pytest.approx(math.pi / 4)
    assert fs_distance(ORIGIN, ChartPoint.infinity()) == pytest.approx(math.pi / 2)
    assert fs_distance(ChartPoint.at(2j), ChartPoint.at(2j)) == 0
    z, w = ChartPoint.at(0.3 - 1j), ChartPoint.at(-4 + 2j)
    assert fs_distance(z, w) == pytest.approx(fs_distance(w, z))
    assert fs_distance(z, w.to_chart(1)) == pytest.approx(fs_distance(z, w))


def test_small_distances_keep_precision():
    eps = 1e-9
    assert fs_distance(ORIGIN, ChartPoint.at(eps)) == pytest.approx(eps, rel=1e-6)


def test_p_kernel_and_covariance():
    z, w = ORIGIN, ChartPoint.at(1)
    assert p_kernel(z, w, 10) == pytest.approx(2**-5)
    assert abs(covariance_entry(z, w, 10)) == pytest.approx(p_kernel(z, w, 10))
    u = ChartPoint.at(0.2 + 0.5j)
    assert covariance_entry(u, u, 7) == pytest.approx(1)
    with pytest.raises(ValueError, match="CP\\^1 and CP\\^2"):
        p_kernel(ORIGIN, ChartPoint.at(0, 0), 3)


def test_covariance_entry_matches_sampled_sections():
    N, T = 8, 100_000
    z, w = ChartPoint.at(0.3 + 0.2j), ChartPoint.at(-0.5 + 0.4j)
    c = sample_coefficients(EnsembleSpec(1, N, master_seed=12), range(T))
    a = weighted_coefficients(c, 1, N)
    powers = np.arange(N + 1)
    xi_z = a @ z.coords[0] ** powers / (1 + abs(z.coords[0]) ** 2) ** (N / 2)
    xi_w = a @ w.coords[0] ** powers / (1 + abs(w.coords[0]) ** 2) ** (N / 2)
    expected = covariance_entry(z, w, N)
    # E |xi_z|^2 |xi_w|^2 <= 2 bounds the variance of each product
    sigma = math.sqrt(2 / T)
    assert abs(np.mean(xi_z * xi_w.conj()) - expected) < 4 * sigma
    assert np.mean(abs(xi_z) ** 2) == pytest.approx(1, abs=4 * sigma)
    assert abs(expected) == pytest.approx(p_kernel(z, w, N), rel=1e-12)


def test_lattice_spectrum():
    lattice = build_lattice(ORIGIN, t=0.5, a=3.0, N=100)
    assert lattice.n == 9
    assert lattice.half_width == 1
    assert lattice.spacing == pytest.approx(0.3)
    delta = covariance_matrix(lattice)
    np.testing.assert_allclose(np.diag(delta.matrix), 1)
    np.testing.assert_allclose(delta.matrix, delta.matrix.conj().T)
    assert row_sum_max(delta) < 0.5
    assert min_eigenvalue(delta) >= 0.5


@pytest.mark.parametrize(("N", "n"), [(100, 25), (400, 81)])
def test_lattice_point_count(N, n):
    lattice = build_lattice(ORIGIN, t=0.5, a=2.5, N=N)
    assert lattice.n == n
    assert lattice.spacing == pytest.approx(2.5 / math.sqrt(N))


def test_lattice_in_two_dimensions():
    lattice = build_lattice(ChartPoint.at(0, 0), t=0.5, a=3.0, N=100)
    assert lattice.n == 81
    assert lattice.coords.shape == (81, 2)
    assert row_sum_max(covariance_matrix(lattice)) < 0.5


def test_lattice_validation():
    with pytest.raises(ValueError, match="half-width"):
        build_lattice(ORIGIN, t=0.6, a=3.0, N=100)
    with pytest.raises(ValueError, match="must be >= 1"):
        build_lattice(ORIGIN, t=0.1, a=3.0, N=100)
    with pytest.raises(ValueError, match="above the cap"):
        build_lattice(ORIGIN, t=0.5, a=0.5, N=10_000)
    with pytest.raises(ValueError, match="positive"):
        build_lattice(ORIGIN, t=0.5, a=0, N=100)


def test_lattice_csv(tmp_path):
    lattice = build_lattice(ORIGIN, t=0.5, a=3.0, N=100)
    lattice.to_csv(tmp_path / "lattice.csv")
    lines = (tmp_path / "lattice.csv").read_text().splitlines()
    assert lines[0] == "nu0,nu1,re0,im0"
    assert len(lines) == 10


def test_coherent_values_match_norm():
    lattice = build_lattice(ORIGIN, t=0.5, a=3.0, N=100)
    s = sample_section(EnsembleSpec(1, 100), 0)
    xi = coherent_values(s, lattice)
    norms = [hermitian_norm(s, p) for p in lattice.points]
    np.testing.assert_allclose(np.abs(xi), norms, rtol=1e-8, atol=1e-12)
    with pytest.raises(ValueError, match="disagree"):
        coherent_values(sample_section(EnsembleSpec(1, 10), 0), lattice)


def test_coherent_covariance_and_whitening():
    lattice = build_lattice(ORIGIN, t=0.5, a=2.4, N=64)
    delta = covariance_matrix(lattice)
    c = sample_coefficients(EnsembleSpec(1, 64, master_seed=3), range(8000))
    xi = coherent_values(c, lattice)
    emp = xi.T @ xi.conj() / len(xi)
    assert np.max(np.abs(emp - delta.matrix)) < 0.1
    zeta = whiten(xi, delta)
    cov = zeta.T @ zeta.conj() / len(zeta)
    assert np.max(np.abs(cov - np.eye(lattice.n))) < 0.1
    bound = math.sqrt(2 * lattice.n) * np.max(np.abs(xi), axis=1)
    assert np.all(np.max(np.abs(zeta), axis=1) <= bound)


def test_whiten_rejects_singular():
    with pytest.raises(ValueError, match="positive definite"):
        whiten(np.ones(2), np.ones((2, 2)))
    with pytest.raises(ValueError, match="length 3"):
        whiten(np.ones(3), np.eye(2))


def test_minimal_spacing():
    a = minimal_spacing(ORIGIN, 0.5, 100)
    assert 1 < a <= 3
    assert row_sum_max(covariance_matrix(build_lattice(ORIGIN, 0.5, a, 100))) <= 0.5
    smaller = build_lattice(ORIGIN, 0.5, round(a - 0.1, 10), 100)
    assert row_sum_max(covariance_matrix(smaller)) > 0.5


def test_decay_profile():
    rows = decay_profile(50, np.array([0.0, 0.1, math.pi / 2]))
    assert rows.shape == (3, 3)
    np.testing.assert_allclose(rows[0], [0, 1, 1])
    assert rows[1, 1] == pytest.approx(math.cos(0.1) ** 50)
    assert rows[2, 1] == pytest.approx(0, abs=1e-15)
    with pytest.raises(ValueError, match="pi/2"):
        decay_profile(50, np.array([2.0]))


@pytest.mark.parametrize("m", [1, 2])
def test_decay_regimes(m):
    regimes = [decay_regimes(N, m) for N in (100, 200, 400)]
    assert all(r.far_scaled_max <= 10 for r in regimes)
    near = [r.near_deviation for r in regimes]
    assert near[0] > near[1] > near[2]
    assert regimes[0].split == pytest.approx(
        math.sqrt(2 * m + 3) * math.sqrt(math.log(100) / 100)
    )
    with pytest.raises(ValueError, match="N >= 2"):
        decay_regimes(1)

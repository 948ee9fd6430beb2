import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from zerolab import ChartPoint, EnsembleSpec, PolySection, QuadratureError
from zerolab.currents import (
    QuadratureGrid,
    RadialBump,
    TestFunction,
    ball_shell_nodes,
    circle_nodes,
    integrate,
    integrate_log_modulus,
    log_modulus_quadrature,
    manifold_volume,
    nevanlinna_bracket,
    pl_linear_statistic,
    pl_quadrature,
    poisson_kernel,
    poisson_kernels,
    poisson_mean,
    polar_nodes,
    smooth_indicator,
    smoothstep,
    sphere_log_minus,
    sphere_nodes,
    volume_sandwich,
)
from zerolab.ensemble import normalization, sample_section, szego_diagonal
from zerolab.zeros import DomainSpec, count_in_domain, find_roots

SMALL_4D = QuadratureGrid(radial_cells=2, angular_points=16)


# ------------------------------ quadrature ------------------------------


def test_grid_validation():
    with pytest.raises(ValueError, match="scheme"):
        QuadratureGrid(scheme="simpson")
    with pytest.raises(ValueError, match="order"):
        QuadratureGrid(order=0)
    coarse = QuadratureGrid().coarsened()
    assert (coarse.radial_cells, coarse.angular_points) == (4, 128)
    assert QuadratureGrid.from_dict(coarse.to_dict()) == coarse


def test_volumes():
    assert manifold_volume(QuadratureGrid(), 1) == pytest.approx(math.pi)
    assert manifold_volume(SMALL_4D, 2) == pytest.approx(math.pi**2 / 2)
    assert np.sum(sphere_nodes(QuadratureGrid(), 2.0).weights) == pytest.approx(1)
    assert np.sum(sphere_nodes(SMALL_4D, 0.5, m=2).weights) == pytest.approx(1)
    shell = ball_shell_nodes(SMALL_4D, (0, 0), 0.5, 1.0)
    assert np.sum(shell.weights) == pytest.approx(math.pi**2 / 2 * (1 - 0.5**4))
    fs_disk = polar_nodes(QuadratureGrid(), 0j, 0.0, 1.0, "fs")
    assert np.sum(fs_disk.weights) == pytest.approx(math.pi / 2)
    with pytest.raises(ValueError, match="limit"):
        ball_shell_nodes(QuadratureGrid(), (0, 0), 0.5, 1.0)


def test_integrate_is_thread_independent():
    nodes = polar_nodes(QuadratureGrid(angular_points=6000), 1j, 0.1, 2.0)

    def func(Z: np.ndarray) -> np.ndarray:
        return np.log(np.abs(Z[:, 1] - 0.3))

    assert integrate(func, nodes, threads=1) == integrate(func, nodes, threads=4)


def test_poisson_kernel():
    assert poisson_kernel(ChartPoint.at(0), ChartPoint.at(1), 1.0) == pytest.approx(1)
    zeta = np.array([0.4 + 0.2j])
    nodes = sphere_nodes(QuadratureGrid(), 1.0)
    mean = integrate(lambda Z: poisson_kernels(zeta, Z[:, 1:], 1.0), nodes)
    assert mean == pytest.approx(1, rel=1e-10)
    with pytest.raises(ValueError, match="below r"):
        poisson_kernel(ChartPoint.at(2), ChartPoint.at(1), 1.0)


# ---------------------------- test functions ----------------------------


def test_smoothstep():
    s, ds, d2s = smoothstep(np.array([-1.0, 0.0, 0.5, 1.0, 2.0]))
    np.testing.assert_allclose(s, [0, 0, 0.5, 1, 1])
    np.testing.assert_allclose(ds[[0, 1, 3, 4]], 0)
    np.testing.assert_allclose(d2s[[1, 3]], 0)


@pytest.mark.parametrize(
    "domain",
    [
        DomainSpec.disk(1.0),
        DomainSpec.disk(0.5, center=1 + 1j),
        DomainSpec.annulus(0.5, 1.5),
        DomainSpec.complement(1.0),
        DomainSpec.cap(0.6, 2.0),
    ],
)
def test_indicator_sandwich(domain):
    inner = smooth_indicator(domain, 0.1, "inner")
    outer = smooth_indicator(domain, 0.1, "outer")
    rng = np.random.default_rng(1)
    z = rng.uniform(-3, 3, 2000) + 1j * rng.uniform(-3, 3, 2000)
    chi = domain.contains_points(z).astype(float)
    assert np.all(inner.values(z) <= chi + 1e-12)
    assert np.all(chi <= outer.values(z) + 1e-12)


def test_indicator_width_validation():
    with pytest.raises(ValueError, match="too large"):
        smooth_indicator(DomainSpec.disk(0.5), 0.5, "inner")
    with pytest.raises(ValueError, match="positive"):
        smooth_indicator(DomainSpec.disk(0.5), 0.0, "inner")
    whole = smooth_indicator(DomainSpec.whole(), 0.1, "inner")
    assert whole.constant == 1
    assert not whole.terms


def test_bump_laplacian_matches_finite_differences():
    bump = RadialBump((0.2j,), radius=1.0, width=0.4)
    z = np.array([[0.5 + 0.6j]])
    h = 1e-4
    steps = [h, -h, 1j * h, -1j * h]
    around = sum(bump.values(z + s) for s in steps)
    fd = (around - 4 * bump.values(z)) / h**2
    assert bump.laplacian(z)[0] == pytest.approx(fd[0], rel=1e-4)
    with pytest.raises(ValueError, match="width < radius"):
        RadialBump((0j,), radius=0.5, width=0.5)


def test_test_function_algebra():
    bump = RadialBump((0j,), 1.0, 0.2)
    psi = TestFunction(1, 0.0, ((1.0, bump),))
    combo = 2 * psi + 1
    z = np.array([0.0, 0.9, 5.0])
    np.testing.assert_allclose(combo.values(z), 2 * psi.values(z) + 1)
    np.testing.assert_allclose((psi - psi).values(z), 0)
    assert psi.values_homogeneous(np.array([[0, 1]]))[0] == 0
    with pytest.raises(ValueError, match="C\\^2"):
        TestFunction(1, 0.0, ((1.0, RadialBump((0j, 0j), 1.0, 0.2)),))


# -------------------------- log-modulus integrals --------------------------


def test_log_integrals_of_constant_section():
    N = 6
    s = PolySection.constant(N)
    signed, absolute = integrate_log_modulus(s)
    assert signed == pytest.approx(-N * math.pi / 2, rel=5e-3)
    assert absolute == pytest.approx(N * math.pi / 2, rel=5e-3)


def test_normalized_shift():
    s = sample_section(EnsembleSpec(1, 8, master_seed=4), 0)
    raw = integrate_log_modulus(s)
    normed = integrate_log_modulus(s, normalized=True)
    shift = math.pi * math.log(normalization(1, 8))
    assert normed.signed - raw.signed == pytest.approx(shift, rel=1e-6)
    assert shift == pytest.approx(math.pi / 2 * math.log(szego_diagonal(1, 8)))
    assert normed.absolute >= abs(normed.signed)


def test_log_quadrature_diagnostics():
    s = sample_section(EnsembleSpec(1, 5), 1)
    signed, absolute = log_modulus_quadrature(s)
    assert signed.refinement_depth > 0
    assert absolute.error_estimate <= 1e-2 * max(1, abs(absolute.estimate))
    assert '"scheme": "gauss_legendre"' in signed.to_json()


def test_quadrature_error_on_crude_grid():
    s = sample_section(EnsembleSpec(1, 8), 0)
    crude = QuadratureGrid(radial_cells=1, angular_points=2, refine_depth=0, tol=1e-12)
    with pytest.raises(QuadratureError, match="successive refinements"):
        integrate_log_modulus(s, crude)


def test_log_integrals_two_dimensions():
    s = PolySection.constant(2, m=2)
    signed, _ = integrate_log_modulus(s, SMALL_4D)
    # -(N/2) int log(1 + |z|^2) over CP^2 is -(N/2) (pi^2 / 2) (3/2)
    assert signed == pytest.approx(-0.75 * math.pi**2, rel=1e-2)


# ------------------------- Poincaré–Lelong pairing -------------------------


def test_pl_constant_test_function_counts_all_zeros():
    s = sample_section(EnsembleSpec(1, 7), 0)
    assert pl_linear_statistic(s, TestFunction(1, 1.0)) == pytest.approx(7, abs=1e-9)
    res = pl_quadrature(s, TestFunction(1, 2.0))
    assert res.cells == QuadratureGrid().radial_cells
    assert res.estimate == pytest.approx(14, abs=1e-9)
    assert res.error_estimate < 1e-9


@pytest.mark.parametrize("trial", range(3))
def test_pl_matches_sum_over_zeros(trial):
    N = 6
    s = sample_section(EnsembleSpec(1, N, master_seed=11), trial)
    roots = find_roots(s)
    psi = smooth_indicator(DomainSpec.disk(1.0), 0.1, "inner")
    direct = math.fsum(psi.values_homogeneous(roots.homogeneous()))
    assert pl_linear_statistic(s, psi, roots=roots) == pytest.approx(
        direct, abs=1e-3 * N
    )


def test_volume_sandwich_brackets_count():
    s = sample_section(EnsembleSpec(1, 10, master_seed=3), 2)
    domain = DomainSpec.disk(1.0)
    lower, upper = volume_sandwich(s, domain, 0.2)
    count = count_in_domain(find_roots(s), domain)
    assert lower - 1e-2 <= count <= upper + 1e-2


def test_volume_sandwich_tightens_as_width_halves():
    s = sample_section(EnsembleSpec(1, 10, master_seed=3), 5)
    domain = DomainSpec.disk(1.0)
    roots = find_roots(s)
    count = count_in_domain(roots, domain)
    brackets = [volume_sandwich(s, domain, w, roots=roots) for w in (0.4, 0.2, 0.1)]
    lows = [lo for lo, _ in brackets]
    highs = [hi for _, hi in brackets]
    gaps = [hi - lo for lo, hi in brackets]
    assert all(b >= a - 1e-2 for a, b in zip(lows, lows[1:]))
    assert all(b <= a + 1e-2 for a, b in zip(highs, highs[1:]))
    assert all(b <= a + 1e-2 for a, b in zip(gaps, gaps[1:]))
    assert all(lo - 1e-2 <= count <= hi + 1e-2 for lo, hi in brackets)


def _bump_area(b: float, w: float) -> float:
    # 2 int_0^b g(rho) rho d rho for the bump g of radius b and width w
    def g(rho: float) -> float:
        return float(smoothstep(np.array([(b - rho) / w]))[0][0]) * rho

    return 2 * sp_integrate.quad(g, 0, b, points=[b - w])[0]


def test_nevanlinna_bracket_of_a_plane():
    # f = z_1 vanishes on a complex line, whose area in the unit ball is pi
    s = PolySection.from_coefficients([0, 1, 0], N=1, m=2)
    grid = QuadratureGrid(radial_cells=4, angular_points=32, tol=0.05)
    lower, upper = nevanlinna_bracket(s, 1.0, width=0.3, quad=grid)
    assert lower < 1 < upper
    assert lower == pytest.approx(_bump_area(1.0, 0.3), abs=1e-2)
    assert upper == pytest.approx(_bump_area(1.3, 0.3), abs=1e-2)


def test_pl_rejects_constant_in_two_dimensions():
    s = PolySection.from_coefficients([0, 1, 0], N=1, m=2)
    with pytest.raises(ValueError, match="infinite Euclidean area"):
        pl_linear_statistic(s, TestFunction(2, 1.0), SMALL_4D)


# ---------------------------- sphere averages ----------------------------


def test_poisson_mean_is_exact_for_harmonic_log():
    s = PolySection.from_coefficients([-2, 1], N=1)
    value = poisson_mean(s, ChartPoint.at(0.3), 1.0)
    assert value == pytest.approx(math.log(1.7), rel=1e-8)


def test_poisson_mean_dominates_log_modulus():
    s = sample_section(EnsembleSpec(1, 12, master_seed=8), 0)
    zeta = ChartPoint.at(0.1 - 0.2j)
    f = abs(np.polyval(s.monomial_coefficients[::-1], zeta.coords[0]))
    assert poisson_mean(s, zeta, 0.8) >= math.log(f) - 1e-6


def test_sphere_log_minus_of_constant():
    r = 1.5
    expected = 0.5 * 5 * math.log1p(r**2)
    assert sphere_log_minus(PolySection.constant(5), r) == pytest.approx(expected)
    value = sphere_log_minus(PolySection.constant(3, m=2), 1.0, SMALL_4D)
    assert value == pytest.approx(1.5 * math.log(2))
    assert sphere_log_minus(PolySection.constant(5), 0.25) > 0
    assert sphere_log_minus(PolySection.constant(5), 3.0) > 0


@pytest.mark.parametrize("r", [0.0, 0.2, 3.5, -1.0])
def test_sphere_log_minus_radius_range(r):
    with pytest.raises(ValueError, match=r"\[0.25, 3.0\]"):
        sphere_log_minus(PolySection.constant(3), r)


def test_zero_on_contour_warns():
    s = PolySection.from_coefficients([-1, 1], N=1)
    with pytest.warns(Warning, match="lie on the circle"):
        sphere_log_minus(s, 1.0)


def test_circle_nodes_are_probability_measure():
    nodes = circle_nodes(QuadratureGrid(), 1 + 1j, 0.5)
    assert np.sum(nodes.weights) == pytest.approx(1)

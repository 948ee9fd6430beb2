import math

import numpy as np
import pytest

from zerolab import ChartPoint, EnsembleSpec, PolySection, sample_section
from zerolab.currents import QuadratureGrid
from zerolab.ensemble import (
    basis_sum,
    dimension,
    evaluate_f,
    hermitian_norm,
    log_hermitian_norm,
    multi_indices,
    normalization,
    norms,
    orthonormality_defect,
    sample_coefficients,
    szego_diagonal,
    szego_leading,
    weighted_coefficients,
)


@pytest.mark.parametrize(("m", "N", "d"), [(1, 10, 11), (2, 10, 66), (2, 1, 3)])
def test_dimension(m, N, d):
    assert dimension(m, N) == d
    assert EnsembleSpec(m, N).dimension == d
    assert len(multi_indices(m, N)) == d


def test_multi_index_order():
    assert multi_indices(2, 2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert multi_indices(1, 3) == ((0,), (1,), (2,), (3,))


def test_spec_validation():
    with pytest.raises(ValueError, match="N must be >= 1"):
        EnsembleSpec(1, 0)
    with pytest.raises(TypeError):
        EnsembleSpec(1, 2.5)
    with pytest.raises(ValueError, match="64 bits"):
        EnsembleSpec(1, 2, master_seed=2**64)


def test_szego_diagonal():
    assert szego_diagonal(1, 10) == pytest.approx(11 / math.pi)
    assert szego_diagonal(2, 10) == pytest.approx(66 * 2 / math.pi**2)
    assert szego_leading(1, 10) == pytest.approx(10 / math.pi)
    assert normalization(1, 10) ** 2 == pytest.approx(szego_diagonal(1, 10))


@pytest.mark.parametrize(("m", "N"), [(1, 1), (1, 25), (2, 6)])
def test_basis_sum_is_constant(m, N):
    rng = np.random.default_rng(0)
    z = rng.uniform(-2, 2, (50, m)) + 1j * rng.uniform(-2, 2, (50, m))
    Z = np.column_stack([np.ones(50), z])
    sums = basis_sum(m, N, Z)
    np.testing.assert_allclose(sums, szego_diagonal(m, N), rtol=1e-9)
    point = ChartPoint.infinity(m)
    assert basis_sum(m, N, point)[0] == pytest.approx(szego_diagonal(m, N))


def test_orthonormality():
    assert orthonormality_defect(1, 5, QuadratureGrid()) < 1e-10
    quad = QuadratureGrid(radial_cells=2, angular_points=16)
    assert orthonormality_defect(2, 3, quad) < 1e-10


def test_sampling_is_deterministic():
    spec = EnsembleSpec(1, 8, master_seed=42)
    a = sample_section(spec, 3)
    b = sample_section(spec, 3)
    np.testing.assert_array_equal(a.coeffs, b.coeffs)
    assert a.trial == 3
    batch = sample_coefficients(spec, [2, 3, 4])
    np.testing.assert_array_equal(batch[1], a.coeffs)
    other = sample_section(EnsembleSpec(1, 8, master_seed=43), 3)
    assert not np.allclose(other.coeffs, a.coeffs)


def test_sampling_moments():
    spec = EnsembleSpec(1, 3, master_seed=1)
    c = sample_coefficients(spec, range(20_000))
    # E c = 0, E |c|^2 = 1, E c^2 = 0
    assert abs(c.mean()) < 0.02
    assert np.mean(np.abs(c) ** 2) == pytest.approx(1.0, abs=0.02)
    assert abs(np.mean(c**2)) < 0.04


def test_second_moment_is_isotropic():
    N, T = 10, 20_000
    c = sample_coefficients(EnsembleSpec(1, N, master_seed=7), range(T))
    rng = np.random.default_rng(1)
    z = rng.standard_normal(19) * 3 + 1j * rng.standard_normal(19) * 3
    Z = np.vstack([np.column_stack([np.ones(19), z]), [0, 1]])
    vals = norms(weighted_coefficients(c, 1, N), 1, N, Z)
    assert vals.shape == (T, 20)
    # normalized |s|^2 has mean Pi_N and variance Pi_N^2 at every point
    second = normalization(1, N) ** 2 * np.mean(vals**2, axis=0)
    moments = second / szego_diagonal(1, N)
    sigma = 1 / math.sqrt(T)
    assert np.all(np.abs(moments - 1) < 5 * sigma)
    assert np.std(moments) < 3 * sigma


def test_section_validation():
    with pytest.raises(ValueError, match="expected d_N = 3"):
        PolySection.from_coefficients([1, 2], N=2)
    with pytest.raises(ValueError, match="finite"):
        PolySection.from_coefficients([1, np.nan, 0], N=2)


def test_evaluate_and_norm():
    # c = [-1, 0, 1] is f(z) = z^2 - 1
    s = PolySection.from_coefficients([-1, 0, 1], N=2)
    assert evaluate_f(s, ChartPoint.at(2)) == pytest.approx(3)
    assert evaluate_f(s, ChartPoint.at(1)) == pytest.approx(0)
    assert hermitian_norm(s, ChartPoint.at(2)) == pytest.approx(3 / 5)
    assert log_hermitian_norm(s, ChartPoint.at(-1)) == -math.inf
    normed = hermitian_norm(s, ChartPoint.at(2), normalized=True)
    assert normed == pytest.approx(0.6 * normalization(1, 2))


def test_norm_is_chart_independent():
    s = sample_section(EnsembleSpec(1, 12), 0)
    z = ChartPoint.at(3 - 4j)
    w = z.to_chart(1)
    assert w.chart == 1
    assert hermitian_norm(s, w) == pytest.approx(hermitian_norm(s, z), rel=1e-12)
    # at infinity |s| is |c_N|
    inf = ChartPoint.infinity()
    assert hermitian_norm(s, inf) == pytest.approx(abs(s.coeffs[-1]))


def test_large_argument_does_not_overflow():
    s = PolySection.constant(40)
    z = ChartPoint.at(1e6)
    assert 0 < hermitian_norm(s, z) < 1e-200
    assert log_hermitian_norm(s, z) == pytest.approx(-20 * math.log1p(1e12))


def test_section_json():
    s = sample_section(EnsembleSpec(2, 3, master_seed=7), 5)
    back = PolySection.from_json(s.to_json())
    np.testing.assert_array_equal(back.coeffs, s.coeffs)
    assert (back.m, back.N, back.trial, back.spec.master_seed) == (2, 3, 5, 7)
    with pytest.raises(ValueError, match="malformed"):
        PolySection.from_dict({"m": 1})


def test_chart_point():
    p = ChartPoint.from_homogeneous([2, 4j])
    assert p.chart == 1
    assert p.coords == (pytest.approx(-0.5j),)
    assert p.to_chart(0).coords[0] == pytest.approx(2j)
    with pytest.raises(ValueError, match="finite"):
        ChartPoint.at(complex("inf"))
    with pytest.raises(ValueError, match="chart must lie"):
        ChartPoint(3, (0j,))

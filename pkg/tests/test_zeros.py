import math

import numpy as np
import pytest

from zerolab import ChartPoint, EnsembleSpec, PolySection, sample_section
from zerolab.ensemble import hermitian_norm, sample_coefficients
from zerolab.zeros import (
    DEFAULT_LEVELS,
    DomainSpec,
    aberth,
    backward_errors,
    count_batch,
    count_in_domain,
    find_roots,
    find_roots_batch,
    max_modulus,
    max_modulus_batch,
    nevanlinna_count,
    sphere_grid,
)


def _section(*coeffs: complex) -> PolySection:
    return PolySection.from_coefficients(coeffs, N=len(coeffs) - 1)


def test_roots_of_z_squared_minus_one():
    roots = find_roots(_section(-1, 0, 1))
    assert roots.at_infinity == 0
    np.testing.assert_allclose(np.sort_complex(roots.roots), [-1, 1], atol=1e-12)
    assert roots.max_residual < 1e-12


def test_double_root_at_origin():
    roots = find_roots(_section(0, 0, 1))
    np.testing.assert_array_equal(roots.roots, [0, 0])
    assert len(roots) == 2


def test_zeros_at_infinity():
    # 1 + sqrt(2) z: one finite zero, and c_N = 0 puts the other at infinity
    roots = find_roots(_section(1, 1, 0))
    assert roots.at_infinity == 1
    assert roots.roots[0] == pytest.approx(-1 / math.sqrt(2))
    assert find_roots(_section(1, 0, 0)).at_infinity == 2
    points = roots.points
    assert points[-1] == ChartPoint.infinity()
    hom = roots.homogeneous()
    assert hom.shape == (2, 2)
    np.testing.assert_allclose(np.linalg.norm(hom, axis=1), 1)


def test_zero_section_is_rejected():
    with pytest.raises(ValueError, match="zero section"):
        find_roots(_section(0, 0, 0))
    with pytest.raises(ValueError, match="m = 1"):
        find_roots(sample_section(EnsembleSpec(2, 3), 0))


@pytest.mark.parametrize("N", [1, 10, 100])
def test_random_roots_are_certified(N):
    s = sample_section(EnsembleSpec(1, N, master_seed=5), 0)
    roots = find_roots(s)
    assert len(roots.roots) == N
    assert roots.max_residual <= 1e-8
    # every zero of the section is a zero of its Hermitian norm
    scale = s.norm()
    for z in roots.points[:10]:
        assert hermitian_norm(s, z) <= 1e-6 * scale


def test_batch_matches_single():
    spec = EnsembleSpec(1, 20, master_seed=9)
    coeffs = sample_coefficients(spec, range(5))
    batch = find_roots_batch(coeffs, 20)
    for t, roots in enumerate(batch):
        single = find_roots(sample_section(spec, t))
        np.testing.assert_allclose(
            np.sort_complex(roots.roots), np.sort_complex(single.roots), atol=1e-10
        )
    with pytest.raises(ValueError, match="expected 21"):
        find_roots_batch(coeffs[:, :5], 20)


def test_aberth_cubic():
    a = np.array([[-6, 11, -6, 1]], dtype=complex)
    result = aberth(a)
    assert result.converged.all()
    np.testing.assert_allclose(np.sort(result.roots[0].real), [1, 2, 3], atol=1e-10)
    assert backward_errors(a, result.roots).max() < 1e-12


def test_roots_csv(tmp_path):
    roots = find_roots(_section(1, 1, 0))
    roots.to_csv(tmp_path / "roots.csv")
    lines = (tmp_path / "roots.csv").read_text().splitlines()
    assert lines[0] == "chart,re,im,residual"
    assert lines[-1] == "1,0.0,0.0,0.0"


def test_counting():
    roots = find_roots(_section(-1, 0, 1))
    assert count_in_domain(roots, DomainSpec.disk(0.5)) == 0
    assert count_in_domain(roots, DomainSpec.disk(1.5)) == 2
    assert count_in_domain(roots, DomainSpec.disk(0.5, center=1)) == 1
    assert count_in_domain(roots, DomainSpec.annulus(0.5, 1.5)) == 2
    assert count_in_domain(roots, DomainSpec.cap(math.pi / 3)) == 2
    assert count_in_domain(roots, DomainSpec.whole()) == 2
    at_inf = find_roots(_section(1, 1, 0))
    assert count_in_domain(at_inf, DomainSpec.complement(2.0)) == 1
    assert count_in_domain(at_inf, DomainSpec.cap(0.1, ChartPoint.infinity())) == 1
    assert nevanlinna_count(roots, 2.0) == 2
    np.testing.assert_array_equal(
        count_batch([roots, at_inf], DomainSpec.disk(1.5)), [2, 1]
    )


def test_fs_areas():
    assert DomainSpec.disk(1).fs_area() == pytest.approx(math.pi / 2)
    # the N = 1 hole probability for |z| < 1/2 is 1 - 0.2
    assert DomainSpec.disk(0.5).fs_area() / math.pi == pytest.approx(0.2)
    assert DomainSpec.whole().fs_area() == pytest.approx(math.pi)
    assert DomainSpec.complement(1).fs_area() == pytest.approx(math.pi / 2)
    assert DomainSpec.annulus(0.5, 1).fs_area() == pytest.approx(0.3 * math.pi)
    assert DomainSpec.cap(0.4, 3 + 1j).fs_area() == pytest.approx(
        math.pi * math.sin(0.4) ** 2
    )
    # an off-centre disk has the area of its FS cap
    off = DomainSpec.disk(0.5, center=2)
    _, alpha = off.as_cap()
    assert off.fs_area() == pytest.approx(math.pi * math.sin(alpha) ** 2)


def test_euclidean_form():
    kind, center, r = DomainSpec.cap(0.3).euclidean_form()
    assert kind == "euclidean_disk"
    assert center == 0
    assert r == pytest.approx(math.tan(0.3))
    kind, _, r = DomainSpec.cap(0.3, ChartPoint.infinity()).euclidean_form()
    assert kind == "complement"
    assert r == pytest.approx(1 / math.tan(0.3))


@pytest.mark.parametrize(
    ("kwargs", "match"),
    [
        ({"kind": "disc", "radii": (1,)}, "unknown domain kind"),
        ({"kind": "euclidean_disk", "radii": ()}, "needs 1 radii"),
        ({"kind": "euclidean_disk", "radii": (-1,)}, "positive"),
        ({"kind": "annulus", "radii": (2, 1)}, "r_in < r_out"),
        ({"kind": "fs_cap", "radii": (2,)}, "below pi/2"),
    ],
)
def test_domain_validation(kwargs, match):
    with pytest.raises(ValueError, match=match):
        DomainSpec(**kwargs)


def test_domain_dict():
    d = DomainSpec.annulus(0.5, 1.5, center=1j)
    assert DomainSpec.from_dict(d.to_dict()) == d
    short = DomainSpec.from_dict({"kind": "euclidean_disk", "radius": 2})
    assert short == DomainSpec.disk(2)


def test_sphere_grid():
    grid = sphere_grid(0.1)
    np.testing.assert_allclose(np.linalg.norm(grid, axis=1), 1)
    assert len(grid) > 100
    with pytest.raises(ValueError, match="positive"):
        sphere_grid(0)


def test_max_modulus_exact_cases():
    assert max_modulus(PolySection.constant(6), DomainSpec.whole()) == pytest.approx(1)
    # |z|^N / (1 + |z|^2)^{N/2} increases towards the unit circle
    top = _section(0, 0, 0, 0, 1)
    value = max_modulus(top, DomainSpec.disk(1))
    assert value == pytest.approx(0.25, rel=0.03)
    assert value < 0.25
    normed = max_modulus(top, DomainSpec.disk(1), normalized=True)
    assert normed == pytest.approx(value * math.sqrt(5 / math.pi))


def test_max_modulus_bound():
    spec = EnsembleSpec(1, 30, master_seed=2)
    coeffs = sample_coefficients(spec, range(20))
    raw = max_modulus_batch(coeffs, 30, DomainSpec.whole())
    assert np.all(raw <= np.linalg.norm(coeffs, axis=1) * (1 + 1e-12))
    assert raw[3] == pytest.approx(
        max_modulus(sample_section(spec, 3), DomainSpec.whole())
    )


def test_max_modulus_refinement_converges():
    spec = EnsembleSpec(1, 50, master_seed=4)
    coeffs = sample_coefficients(spec, range(100))
    coarse = max_modulus_batch(coeffs, 50, DomainSpec.whole(), levels=3)
    fine = max_modulus_batch(coeffs, 50, DomainSpec.whole(), levels=4)
    assert np.all(fine >= coarse)
    np.testing.assert_allclose(fine, coarse, rtol=1e-3)
    assert DEFAULT_LEVELS == 4
    np.testing.assert_array_equal(
        max_modulus_batch(coeffs, 50, DomainSpec.whole()), fine
    )


@pytest.mark.parametrize(
    "section",
    [
        _section(0, 2, 1, 0),
        sample_section(EnsembleSpec(1, 12, master_seed=6), 0),
        sample_section(EnsembleSpec(1, 16, master_seed=6), 1),
    ],
    ids=["degenerate", "N12", "N16"],
)
def test_roots_reconstruct_coefficients(section):
    a = section.monomial_coefficients
    roots = find_roots(section)
    k = section.N - roots.at_infinity
    # Vieta: a_0 + ... + a_k z^k = a_k prod (z - z_i), and a_j = 0 above k
    rebuilt = a[k] * np.poly(roots.roots)[::-1]
    np.testing.assert_allclose(rebuilt, a[: k + 1], atol=1e-8 * np.linalg.norm(a))
    np.testing.assert_array_equal(a[k + 1 :], 0)


@pytest.mark.parametrize("N", [1, 7, 40])
def test_degree_is_conserved(N):
    spec = EnsembleSpec(1, N, master_seed=8)
    coeffs = sample_coefficients(spec, range(2000)).copy()
    coeffs[1::7, -1] = 0
    coeffs[3::7, 0] = 0
    batch = find_roots_batch(coeffs, N)
    assert len(batch) == 2000
    for roots in batch:
        assert len(roots.roots) + roots.at_infinity == N
    assert sum(r.at_infinity > 0 for r in batch) == len(range(1, 2000, 7))

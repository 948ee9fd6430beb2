import json
import math
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from zerolab import CensoredEstimateWarning, ChartPoint, ConfigError
from zerolab.currents import QuadratureGrid
from zerolab.deviations import (
    DRIVERS,
    BernoulliTally,
    ExperimentConfig,
    RatePoint,
    RunConfig,
    TrialRecord,
    adapted_basis,
    bound_consistency,
    expected_count_fraction,
    fit_rate,
    hole_lower_bound,
    load_config,
    predicted_log_integrals,
    read_records,
    run_experiment,
    run_hole_experiment,
    run_kernel_suite,
    run_l1_log_experiment,
    run_max_modulus_experiment,
    run_pl_check,
    run_zero_count_experiment,
    sigma_center,
    sigma_power_norm,
    wilson_interval,
    write_records,
)
from zerolab.zeros import DomainSpec

HOLE = ExperimentConfig(
    "hole", degrees=(1, 2, 3, 4), trials=2000, domain=DomainSpec.disk(0.5)
)


# ------------------------------ statistics ------------------------------


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0
    assert hi == pytest.approx(0.036994, rel=1e-3)
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert 0.5 - lo == pytest.approx(hi - 0.5)
    assert wilson_interval(0, 0) == (0.0, 1.0)
    with pytest.raises(ValueError, match="hits must lie"):
        wilson_interval(5, 4)


def test_wilson_coverage():
    rng = np.random.default_rng(0)
    p, n, reps = 0.3, 200, 2000
    hits = rng.binomial(n, p, reps)
    covered = 0
    for h in hits:
        lo, hi = wilson_interval(int(h), n)
        covered += lo <= p <= hi
    assert covered / reps >= 0.93


def test_bernoulli_tally():
    tally = BernoulliTally().update([True, False, False, True])
    assert (tally.trials, tally.hits, tally.estimate) == (4, 2, 0.5)
    merged = tally.merge(BernoulliTally(6, 1))
    assert (merged.trials, merged.hits) == (10, 3)
    assert math.isnan(BernoulliTally().estimate)
    assert merged.half_width() == pytest.approx(
        0.5 * (merged.interval()[1] - merged.interval()[0])
    )


def test_records_jsonl(tmp_path):
    recs = [
        TrialRecord("hole", 0, 4, count=0, hole=True, wall_time=0.01),
        TrialRecord("hole", 1, 4, flagged="root certification failed"),
    ]
    path = tmp_path / "records.jsonl"
    assert write_records(recs, path) == 2
    back = list(read_records(path))
    assert back == recs
    assert not back[1].ok
    assert "count" not in json.loads(recs[1].to_json())


def test_fit_rate_recovers_quadratic_decay():
    pts = [(N, math.exp(-0.03 * N**2)) for N in range(4, 13)]
    fit = fit_rate(pts, exponent=2)
    assert fit.slope == pytest.approx(0.03, rel=1e-6)
    assert fit.intercept == pytest.approx(0, abs=1e-6)
    assert fit.r_squared == pytest.approx(1)
    assert fit.r_squared_gap > 0


def test_fit_rate_prefers_true_exponent():
    pts = [(N, math.exp(-N)) for N in range(2, 10)]
    fit = fit_rate(pts, exponent=2)
    assert fit.linear.slope == pytest.approx(1)
    assert fit.linear.r_squared == pytest.approx(1)
    assert fit.r_squared < fit.linear.r_squared
    assert fit.to_dict()["r_squared_gap"] < 0


def test_fit_rate_skips_censored():
    pts = [
        RatePoint(2, 0.5),
        RatePoint(3, 0.2),
        RatePoint(4, 0.05),
        RatePoint(5, 0.0, censored=True),
    ]
    fit = fit_rate(pts)
    assert len(fit.points) == 4
    with pytest.raises(ValueError, match="at least 3"):
        fit_rate(pts[2:])


# ---------------------------- configuration -----------------------------


def test_config_trials_error_path():
    with pytest.raises(ConfigError) as exc:
        RunConfig.from_dict({"experiments": [{"kind": "hole", "trials": 10}]})
    assert exc.value.path == "experiments[0].trials"
    assert "trials must be >= 100" in str(exc.value)


@pytest.mark.parametrize(
    ("data", "path"),
    [
        ({"seed": 1}, "seed"),
        ({"experiments": [{"kind": "holes"}]}, "experiments[0].kind"),
        ({"experiments": [{"trials": 200}]}, "experiments[0].kind"),
        (
            {"experiments": [{"kind": "hole", "trials": True}]},
            "experiments[0].trials",
        ),
        ({"experiments": [{"kind": "hole", "m": 2}]}, "experiments[0].m"),
        ({"experiments": [{"kind": "hole", "colour": 1}]}, "experiments[0].colour"),
        (
            {"experiments": [{"kind": "kernel-suite", "degrees": [4]}]},
            "experiments[0].degrees",
        ),
        (
            {"experiments": [{"kind": "hole", "domain": {"kind": "annulus"}}]},
            "experiments[0].domain",
        ),
        (
            {"experiments": [{"kind": "l1-log", "quadrature": {"cells": 2}}]},
            "experiments[0].quadrature.cells",
        ),
        (
            {
                "experiments": [
                    {"kind": "zero-count", "m": 2, "quadrature": {"radial_cells": 8}}
                ]
            },
            "experiments[0].quadrature",
        ),
        ({"master_seed": -1}, "master_seed"),
        ({"threads": 0}, "threads"),
    ],
)
def test_config_errors(data, path):
    with pytest.raises(ConfigError) as exc:
        RunConfig.from_dict(data)
    assert exc.value.path == path


def test_load_json_and_toml(tmp_path):
    (tmp_path / "run.json").write_text(
        json.dumps(
            {
                "master_seed": 7,
                "experiments": [
                    {
                        "kind": "zero-count",
                        "degrees": [10, 20],
                        "trials": 500,
                        "deltas": [0.1, 0.2],
                        "domain": {"kind": "euclidean_disk", "radius": 1.0},
                    }
                ],
            }
        )
    )
    (tmp_path / "run.toml").write_text(
        "master_seed = 7\n\n"
        "[[experiments]]\n"
        'kind = "zero-count"\n'
        "degrees = [10, 20]\n"
        "trials = 500\n"
        "deltas = [0.1, 0.2]\n"
        'domain = { kind = "euclidean_disk", radius = 1.0 }\n'
    )
    from_json = load_config(tmp_path / "run.json")
    from_toml = load_config(tmp_path / "run.toml")
    assert from_json == from_toml
    assert from_json.experiments[0].degrees == (10, 20)
    assert from_json.config_hash() == from_toml.config_hash()
    assert from_json.with_overrides(threads=8).config_hash() == from_json.config_hash()
    assert from_json.with_overrides(master_seed=8).config_hash() != (
        from_json.config_hash()
    )


def test_load_config_failures(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")
    (tmp_path / "run.yaml").write_text("experiments: []")
    with pytest.raises(ConfigError, match="unsupported"):
        load_config(tmp_path / "run.yaml")
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(tmp_path / "bad.json")


CONFIGS = sorted((Path(__file__).parent.parent / "docs" / "configs").glob("*.*"))


@pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.name)
def test_shipped_configs_parse(path):
    cfg = load_config(path)
    assert cfg.experiments
    assert str(cfg.output_dir).startswith("results")


def test_two_dimensional_defaults():
    cfg = ExperimentConfig.from_dict({"kind": "zero-count", "m": 2})
    assert cfg.domain == DomainSpec.ball(1.0)
    assert cfg.quadrature.angular_points < QuadratureGrid().angular_points


# --------------------------- analytic pieces ----------------------------


def test_expected_count_fraction():
    assert expected_count_fraction(DomainSpec.disk(1)) == pytest.approx(0.5)
    assert expected_count_fraction(DomainSpec.disk(0.5)) == pytest.approx(0.2)
    assert expected_count_fraction(DomainSpec.ball(1.0)) == pytest.approx(0.5)
    with pytest.raises(ValueError, match="centred ball"):
        expected_count_fraction(DomainSpec.ball(1.0, center=(0.5, 0)))


def test_predicted_log_integrals():
    pred = predicted_log_integrals(1, 10)
    L = math.log(11 / math.pi)
    assert pred.signed == pytest.approx(0.5 * math.pi * (L - np.euler_gamma))
    assert pred.absolute > abs(pred.signed)
    two = predicted_log_integrals(2, 10)
    L2 = math.log(66 * 2 / math.pi**2)
    assert two.signed == pytest.approx(0.25 * math.pi**2 * (L2 - np.euler_gamma))


def test_hole_lower_bound_golden_values():
    hb = hole_lower_bound(DomainSpec.disk(0.5), 4)
    assert hb.a == pytest.approx(0.5 * math.log(1.25))
    assert hb.a == pytest.approx(0.11157178, abs=1e-8)
    assert hb.b == pytest.approx(0.56418958, abs=1e-8)
    assert hb.log_bound == pytest.approx(-23.90473418, abs=1e-7)
    assert hb.bound == pytest.approx(math.exp(hb.log_bound))
    assert hb.witness_ok is None


@pytest.mark.parametrize(
    ("bound", "p_hat", "lo", "hi", "expected"),
    [
        (0.01, 0.5, 0.45, 0.55, True),
        (0.45, 0.5, 0.45, 0.55, False),
        (0.52, 0.5, 0.45, 0.55, False),
        (0.03, 0.02, 0.005, 0.06, False),
        (0.001, 0.02, 0.005, 0.06, None),
        (1e-50, 0.0, 0.0, 0.037, None),
    ],
)
def test_bound_consistency(bound, p_hat, lo, hi, expected):
    assert bound_consistency(bound, p_hat, lo, hi) is expected


def test_sigma_center():
    center, a = sigma_center(DomainSpec.cap(0.4, 1 + 1j))
    assert center == ChartPoint.at(1 + 1j)
    assert a == pytest.approx(-math.log(math.cos(0.4)))
    with pytest.raises(ValueError, match="contains the zero"):
        sigma_center(DomainSpec.complement(1.0))
    with pytest.raises(ValueError, match="contains the zero"):
        hole_lower_bound(DomainSpec.whole(), 3)


def test_adapted_basis():
    Q = adapted_basis(6)
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(7), atol=1e-12)
    np.testing.assert_allclose(np.abs(Q[:, 0]), np.eye(7)[0], atol=1e-12)
    p = ChartPoint.at(1 + 1j)
    Qp = adapted_basis(5, p, QuadratureGrid())
    np.testing.assert_allclose(Qp.conj().T @ Qp, np.eye(6), atol=1e-12)
    assert sigma_power_norm(5, p, QuadratureGrid()) == pytest.approx(
        sigma_power_norm(5), rel=1e-8
    )


@pytest.mark.parametrize(
    "domain", [DomainSpec.disk(0.5), DomainSpec.cap(0.4, 1 + 1j)], ids=["disk", "cap"]
)
def test_witness_sections_have_holes(domain):
    hb = hole_lower_bound(domain, 4, witness_samples=200)
    assert hb.witness_ok is True
    assert hb.witness_trials == 200


# ------------------------------ experiments ------------------------------


def test_hole_experiment():
    records = []
    result = run_hole_experiment(HOLE, master_seed=1, sink=records.append)
    rows = result.summary
    assert [r["N"] for r in rows] == [1, 2, 3, 4]
    # one zero, uniform under the FS measure: P(no zero in |z| < 1/2) = 0.8
    assert rows[0]["p_hat"] == pytest.approx(0.8, abs=0.03)
    p = [r["p_hat"] for r in rows]
    assert p == sorted(p, reverse=True)
    assert all(r["bound_consistent"] for r in rows)
    assert result.checks == {"lower_bound": True}
    assert result.passed
    assert "hole" in result.rate_fits
    assert result.trials == 4 * 2000
    assert len(records) == 4 * 2000
    # the streaming tally and a replay of the records agree
    for row in rows:
        replay = BernoulliTally().update(
            r.hole for r in records if r.N == row["N"] and r.ok
        )
        assert replay.hits == row["hits"]


def test_hole_experiment_is_thread_independent():
    cfg = replace(HOLE, degrees=(2, 3), trials=600, batch_size=64)
    one = run_hole_experiment(cfg, master_seed=3, threads=1)
    four = run_hole_experiment(cfg, master_seed=3, threads=4)
    assert one.summary == four.summary


def test_underpowered_hole_warns():
    cfg = replace(HOLE, degrees=(12,), trials=100)
    with pytest.warns(CensoredEstimateWarning, match="underpowered"):
        result = run_hole_experiment(cfg)
    row = result.summary[0]
    assert row["censored"] is (row["hits"] == 0)
    assert not result.rate_fits
    # a positive bound says nothing against p_hat = 0
    assert row["hits"] == 0
    assert row["lower_bound"] > 0
    assert row["bound_consistent"] is None
    assert "lower_bound" not in result.checks


def test_hole_witness_check():
    cfg = replace(HOLE, degrees=(1, 2, 3), trials=500, witness_samples=50)
    result = run_hole_experiment(cfg)
    assert result.checks == {"lower_bound": True, "witness": True}
    assert all(r["witness_ok"] for r in result.summary)


def test_zero_count_experiment():
    cfg = ExperimentConfig(
        "zero-count", degrees=(10,), trials=500, deltas=(0.1, 0.2, 0.3)
    )
    result = run_zero_count_experiment(cfg, master_seed=2)
    rows = result.summary
    assert len(rows) == 3
    assert rows[0]["expected"] == pytest.approx(0.5)
    assert rows[0]["mean"] == pytest.approx(0.5, abs=0.03)
    p = [r["p_hat"] for r in rows]
    assert p[0] >= p[1] >= p[2]
    assert result.flagged == 0


@pytest.mark.slow
def test_zero_count_two_dimensions():
    cfg = ExperimentConfig(
        "zero-count",
        m=2,
        degrees=(2,),
        trials=100,
        domain=DomainSpec.ball(1.0),
        deltas=(0.4,),
        quadrature=QuadratureGrid(radial_cells=4, angular_points=32, tol=0.2),
    )
    result = run_zero_count_experiment(cfg)
    row = result.summary[0]
    assert row["expected"] == pytest.approx(0.5)
    assert row["mean"] == pytest.approx(0.5, abs=0.1)


def test_max_modulus_experiment():
    cfg = ExperimentConfig(
        "max-modulus",
        degrees=(10,),
        trials=200,
        domain=DomainSpec.whole(),
        deltas=(0.5,),
    )
    result = run_max_modulus_experiment(cfg)
    row = result.summary[0]
    assert result.checks == {"deterministic_bound": True}
    assert row["p_hat"] == 0
    assert row["censored"]
    assert 0 < row["median"] < 0.5


def test_l1_log_experiment():
    cfg = ExperimentConfig("l1-log", degrees=(5,), trials=100, deltas=(2.0,))
    result = run_l1_log_experiment(cfg)
    row = result.summary[0]
    assert result.checks == {"absolute_dominates_signed": True}
    assert row["p_hat"] == 0
    assert row["mean"] == pytest.approx(row["predicted"], rel=0.3)
    assert row["predicted"] == pytest.approx(predicted_log_integrals(1, 5).absolute)


def test_kernel_suite():
    cfg = ExperimentConfig("kernel-suite", degrees=(100,), trials=1000)
    records = []
    result = run_kernel_suite(cfg, sink=records.append)
    assert result.passed, result.checks
    row = result.summary[0]
    assert row["points"] == 9
    assert row["row_sum_max"] < 0.5
    assert row["min_eigenvalue"] >= 0.5
    assert row["basis_sum_error"] <= 1e-9
    assert len(records) == 1000
    assert all(r.bound_ok for r in records)


def test_pl_check():
    cfg = ExperimentConfig("pl-check", degrees=(6,), trials=100)
    result = run_pl_check(cfg)
    row = result.summary[0]
    assert result.checks == {"pl_agreement": True, "constant_total": True}
    assert row["max_error"] <= 1e-3 * 6
    assert row["constant_error"] <= 1e-6


def test_run_experiment_dispatch():
    assert set(DRIVERS) == {
        "zero-count",
        "hole",
        "max-modulus",
        "l1-log",
        "kernel-suite",
        "pl-check",
    }
    cfg = replace(HOLE, degrees=(1,), trials=200)
    assert run_experiment(cfg).summary[0]["N"] == 1
    with pytest.raises(ValueError, match="no driver"):
        run_experiment(replace(cfg, kind="nothing"))

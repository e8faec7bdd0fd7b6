"""Tests for the Monte Carlo harness and CLT validation experiments."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hdwn.autocov import lag_stat
from hdwn.clt import s_variance
from hdwn.montecarlo import (
    RESULT_CSV_HEADER,
    MonteCarloConfig,
    ResultRow,
    ResultTable,
    run_size_power,
    validate_joint_clt,
    validate_single_lag_clt,
    validate_lss_cross_covariance,
)
from hdwn.rmt import SpectralDistribution

SMALL_CFG = MonteCarloConfig(
    scenario="gaussian_wn",
    pairs=((10, 20), (8, 16)),
    qs=(1, 2),
    reps=40,
    methods=("phi", "john_simes"),
    base_seed=77,
)


def test_config_validation():
    with pytest.raises(ValueError):
        MonteCarloConfig(scenario="nope", pairs=((4, 8),))
    with pytest.raises(ValueError):
        MonteCarloConfig(scenario="gaussian_wn", pairs=())
    with pytest.raises(ValueError):
        MonteCarloConfig(scenario="gaussian_wn", pairs=((4, 8),), methods=("bogus",))
    with pytest.raises(ValueError):
        MonteCarloConfig(scenario="gaussian_wn", pairs=((4, 8),), qs=(0,))


def test_known_nu4_defaults():
    assert SMALL_CFG.nu4_value == 3.0
    gamma = MonteCarloConfig(scenario="gamma_wn", pairs=((4, 8),))
    assert gamma.nu4_value == 4.5
    override = MonteCarloConfig(scenario="gamma_wn", pairs=((4, 8),), nu4=4.0)
    assert override.nu4_value == 4.0


def test_run_size_power_deterministic_and_keyed():
    t1 = run_size_power(SMALL_CFG)
    t2 = run_size_power(SMALL_CFG)
    assert t1 == t2
    keys = {row.key for row in t1.rows}
    assert len(keys) == len(t1.rows) == 8  # 2 pairs x 2 methods x 2 qs
    for row in t1.rows:
        assert 0.0 <= row.rejection_rate <= 1.0
        assert row.se == pytest.approx(
            np.sqrt(row.rejection_rate * (1 - row.rejection_rate) / row.reps)
        )


def test_run_size_power_single_rep_rates_are_binary():
    cfg = MonteCarloConfig(scenario="gaussian_wn", pairs=((6, 12),), reps=1,
                           methods=("phi",), qs=(1,), base_seed=3)
    (row,) = run_size_power(cfg).rows
    assert row.rejection_rate in (0.0, 1.0)


def test_run_size_power_thread_count_does_not_change_rates():
    serial = run_size_power(SMALL_CFG, threads=1)
    parallel = run_size_power(SMALL_CFG, threads=2)
    assert serial == parallel


def test_gamma_ar_power_matches_reference_value():
    # tabulated reference power under the Gamma AR(1) alternative
    cfg = MonteCarloConfig(
        scenario="gamma_ar1", a=0.1, pairs=((150, 100),), qs=(1,),
        reps=800, methods=("phi",), base_seed=12,
    )
    (row,) = run_size_power(cfg).rows
    assert row.rejection_rate == pytest.approx(0.4545, abs=0.06)


def test_permutation_method_runs_in_harness():
    cfg = MonteCarloConfig(scenario="gaussian_wn", pairs=((6, 12),), reps=5,
                           methods=("permutation",), qs=(1,), B=25, base_seed=1)
    (row,) = run_size_power(cfg).rows
    assert row.method == "permutation"
    assert 0.0 <= row.rejection_rate <= 1.0


def test_result_table_csv_round_trip_exact():
    table = run_size_power(SMALL_CFG)
    text = table.to_csv(timing=True)
    assert text.splitlines()[0] == RESULT_CSV_HEADER
    back = ResultTable.from_csv(text)
    assert back == table
    # seconds survive the round trip exactly too (repr formatting)
    assert [r.seconds for r in back.rows] == [r.seconds for r in table.rows]


def test_result_table_timing_can_be_suppressed():
    table = run_size_power(SMALL_CFG)
    text = table.to_csv(timing=False)
    assert all(line.endswith(",0.0") for line in text.splitlines()[1:])


def test_result_table_rejects_duplicate_keys():
    row = ResultRow(4, 8, 0.5, 0.0, "phi", 1, 0.0, 0.0, 10, 0.0)
    with pytest.raises(ValueError):
        ResultTable([row, row])


def test_from_toml_round_trip(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text(
        "schema = 1\n[experiment]\nscenario = \"gamma_wn\"\n"
        "pairs = [[10, 20]]\nqs = [1]\nreps = 7\nmethods = [\"phi\"]\n"
        "base_seed = 5\n"
    )
    cfg = MonteCarloConfig.from_toml(path)
    assert cfg.scenario == "gamma_wn"
    assert cfg.pairs == ((10, 20),)
    assert cfg.reps == 7


def test_from_toml_validation(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[experiment]\npairs = [[10, 20]]\n")
    with pytest.raises(ValueError):
        MonteCarloConfig.from_toml(bad)  # missing schema
    bad.write_text("schema = 1\n[experiment]\npairs = [[10, 20]]\nfoo = 3\n")
    with pytest.raises(ValueError):
        MonteCarloConfig.from_toml(bad)  # unknown key
    bad.write_text("schema = 1\n[experiment]\nscenario = \"gaussian_wn\"\n")
    with pytest.raises(ValueError):
        MonteCarloConfig.from_toml(bad)  # missing pairs


# ---------------------------------------------------------------------------
# CLT validations
# ---------------------------------------------------------------------------


def test_validate_single_lag_theory_fields():
    out = validate_single_lag_clt(20, 40, reps=150, nu4=3.0, seed=1)
    assert out["theory_mean"] == 0.5
    assert out["theory_var"] == pytest.approx(1 + 1.5 * 0.5 * 2)
    assert out["reps"] == 150


def test_validate_single_lag_small_ratio_variance():
    # at small c the variance approaches 1 (Gaussian case: 1 + 3c)
    out = validate_single_lag_clt(50, 1000, reps=400, nu4=3.0, seed=2)
    assert out["theory_var"] == pytest.approx(1.15)
    assert out["emp_var"] == pytest.approx(out["theory_var"], abs=0.25)
    assert out["emp_mean"] == pytest.approx(0.5, abs=4 * out["se_mean"])


def test_validate_joint_theory_identity_and_shape():
    out = validate_joint_clt(20, 40, q=3, reps=1000, nu4=3.0, seed=3)
    theory = out["theory_cov"]
    assert theory.sum() == pytest.approx(s_variance(3, 0.5, 3.0), abs=1e-12)
    assert out["emp_cov"].shape == (3, 3)
    assert out["max_abs_dev"] >= 0


def test_joint_cross_covariance_vanishes_for_rademacher():
    # nu4 = 1 surrogate: +-1 entries kill the cross-lag covariance
    rng = np.random.default_rng(9)
    reps, p, n = 800, 30, 60
    vals = np.empty((reps, 2))
    for r in range(reps):
        x = rng.choice([-1.0, 1.0], size=(p, n))
        vals[r] = [(n / p) * lag_stat(x, tau) for tau in (1, 2)]
    emp = np.cov(vals.T)
    se = np.sqrt((emp[0, 0] * emp[1, 1] + emp[0, 1] ** 2) / reps)
    assert abs(emp[0, 1]) < 4 * se


def test_validate_lss_cross_covariance_constant_function_is_degenerate():
    out = validate_lss_cross_covariance(12, 24, reps=40, H2=SpectralDistribution.point_mass(1.0),
                            f=(5.0,), seed=4)
    assert out["emp_cov_12"] == 0.0
    assert out["emp_var_1"] == 0.0 and out["emp_var_2"] == 0.0


def test_validate_lss_cross_covariance_identity_population_small_run():
    # B1 == B2 when Q = I, so the cross-covariance equals the variance 2c
    out = validate_lss_cross_covariance(40, 80, reps=600, H2=SpectralDistribution.point_mass(1.0),
                            f=(0.0, 1.0), seed=5)
    assert out["theory_cov_12"] == pytest.approx(1.0, abs=1e-6)
    assert out["emp_cov_12"] == pytest.approx(out["emp_var_1"], abs=1e-12)
    assert out["emp_cov_12"] == pytest.approx(1.0, abs=5 * out["se_cov_12"])


def test_validate_lss_cross_covariance_guards():
    with pytest.raises(ValueError):
        validate_lss_cross_covariance(10, 20, reps=10, f=np.ones(6))  # degree cap 4
    with pytest.raises(ValueError):
        validate_lss_cross_covariance(10, 20, reps=10,
                          H2=SpectralDistribution.discrete({-1.0: 0.5, 1.0: 0.5}))

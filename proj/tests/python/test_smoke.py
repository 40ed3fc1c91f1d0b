# End-to-end smoke checks for the Python bindings: config round trip,
# correlation anchors, one optimizer run with power recovery, the Monte-Carlo
# entry points and the exception mapping. Numerical depth lives in the C++
# test suite; this exercises the binding surface.

import math

import pytest

import ctsf

DEMO = {
    "num_bands": 4,
    "true_bands": [0, 2],
    "fake_bands": [1, 3],
    "alpha": 0.8,
    "total_power_db": 10.0,
    "deception_threshold": 0.5,
    "rician_k_db": 10.0,
    "mean_gain": 1.0,
    "bob_noise_power": 1.0,
    "eve_noise_power": 1.0,
    "trials": 25,
    "seed": 42,
}


def demo_scenario(**overrides):
    cfg = dict(DEMO)
    cfg.update(overrides)
    return ctsf.scenario_from_dict(cfg)


def test_version():
    assert ctsf.__version__ == "0.1.0"


def test_config_round_trip_and_validation():
    sc = demo_scenario()
    assert ctsf.validate_scenario(sc) == []
    assert sc.plan.num_bands == 4
    assert sc.plan.true_bands == [0, 2]
    assert sc.threshold == 0.5
    assert sc.total_power == pytest.approx(ctsf.db_to_linear(10.0))
    again = ctsf.scenario_from_dict(ctsf.scenario_to_dict(sc))
    assert ctsf.scenario_to_json(again) == ctsf.scenario_to_json(sc)


def test_validation_reports_bad_alpha():
    sc = demo_scenario(alpha=0.0)
    messages = ctsf.validate_scenario(sc)
    assert any("alpha" in msg for msg in messages)


def test_correlation_anchors():
    assert ctsf.correlation(1.0, 0, 1, 4) <= 1e-12
    assert ctsf.correlation(0.5, 1, 0, 4) == pytest.approx(
        0.426776695296637, abs=1e-12)
    assert ctsf.correlation(0.8, 0, 1, 4) == pytest.approx(0.0625, abs=1e-12)
    assert ctsf.correlation(0.3, 2, 2, 4) == 1.0
    C = ctsf.correlation_matrix(0.7, 4)
    for i in range(4):
        for k in range(4):
            assert C.at(i, k) == pytest.approx(
                ctsf.correlation(0.7, i, k, 4), abs=1e-15)


def test_fit_alpha_round_trip():
    targets = [ctsf.correlation(0.7, i, 0, 4) for i in range(4)]
    fit = ctsf.fit_alpha(targets, 4, 0, alpha0=0.6)
    assert fit.converged
    assert fit.alpha_star == pytest.approx(0.7, abs=1e-6)
    assert fit.residual <= 1e-12


def test_optimize_and_recover_one_realization():
    sc = demo_scenario(trials=1)
    ch = ctsf.make_batch(sc).realizations[0]
    assert ch.unit_noise()

    res = ctsf.bado_multistart(ch, sc.plan, sc.threshold, sc.total_power)
    assert res.converged
    assert res.objective > 0.0
    assert res.trace[-1] == pytest.approx(res.objective)
    violation, name = ctsf.max_constraint_violation(
        res.xi_star, ch, sc.plan, sc.threshold, sc.total_power)
    assert violation <= 1e-7, name

    rec = ctsf.recover_powers(res, ch, sc.plan, sc.threshold)
    assert rec.powers.total() <= sc.total_power * (1 + 1e-9)
    for c, p, xi in zip(rec.coefficients, rec.powers.p, res.xi_star):
        assert 0.0 <= c <= 1.0
        assert p * c == pytest.approx(xi, abs=1e-9)

    # The recovered allocation has to clear the decoy floor when re-evaluated
    # through the SINR module.
    C = ctsf.CorrelationMatrix.from_interferer_coeffs(rec.coefficients)
    report = ctsf.sinr_report(rec.powers, ch, C, sc.plan)
    for v in report.eve_decoy:
        assert v >= sc.threshold * (1 - 1e-6)


def test_run_point_is_deterministic():
    sc = demo_scenario(trials=25)
    first = ctsf.record_to_dict(ctsf.run_point(sc, "equal"))
    second = ctsf.record_to_dict(ctsf.run_point(sc, "equal"))
    assert first == second
    assert first["trials"] == 25
    assert 0.0 <= first["feasible_fraction"] <= 1.0


def test_sweep_order_and_csv_header():
    sc = demo_scenario(trials=6)
    records = ctsf.sweep_threshold(sc, [0.0, 0.5], ["bado", "equal"])
    assert [(r.sweep_value, r.method) for r in records] == [
        (0.0, "bado"), (0.0, "equal"), (0.5, "bado"), (0.5, "equal")]
    csv = ctsf.metrics_csv(records)
    lines = csv.splitlines()
    assert lines[0] == ("sweep_value,method,mean_sum_secrecy,"
                        "mean_intercept_sinr,mean_decoy_sinr,interception_prob,"
                        "deception_prob,feasible_fraction,trials,stderr_secrecy")
    assert len(lines) == 5


def test_infeasible_maps_to_exception():
    plan = demo_scenario().plan
    ch = ctsf.make_channels([1.0] * 4, [1.0] * 4)
    with pytest.raises(ctsf.Infeasible) as err:
        ctsf.bado_multistart(ch, plan, 1e6, 1.0)
    assert "decoy floor" in str(err.value)


def test_rng_streams_are_reproducible():
    a = ctsf.Rng.keyed(7, 3)
    b = ctsf.Rng.keyed(7, 3)
    params = ctsf.RicianParams()
    params.k_factor = 10.0
    params.mean_gain = 1.0
    ga = ctsf.draw_channels(params, 8, a)
    gb = ctsf.draw_channels(params, 8, b)
    assert ga == gb
    assert all(g > 0 for g in ga)
    assert not math.isclose(ga[0], ga[1])

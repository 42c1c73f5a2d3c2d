import math

import numpy as np
import pytest

import mcure


def test_incidence_probability():
    assert mcure.incidence_probability(np.array([1.0, 0.0]), np.array([0.0, 2.0])) == 0.5
    p = mcure.incidence_probability(np.array([1.0, 1.0, 0.0]), np.array([0.4, 0.5, 0.1]))
    assert abs(p - 0.7109495026250040) < 1e-12


def test_kaplan_meier_three_points():
    times, values = mcure.kaplan_meier(
        np.array([1.0, 2.0, 3.0]), np.array([1, 0, 1], dtype=np.int32)
    )
    assert list(times) == [1.0, 3.0]
    assert values[0] == pytest.approx(2.0 / 3.0)
    assert values[1] == pytest.approx(0.0)


def test_log_likelihood_hand_value():
    total, per_obs = mcure.log_likelihood(
        times=np.array([1.0]),
        status=np.array([1], dtype=np.int32),
        x=np.zeros((1, 1)),
        z_covariates=np.zeros((1, 0)),
        b=np.array([0.0]),
        beta=np.array([0.0]),
        **{"lambda": np.array([1.0])},
        cut_points=np.array([0.0, 2.0]),
    )
    assert total == pytest.approx(math.log(0.5) - 1.0, abs=1e-12)
    assert per_obs.shape == (1,)


def test_generate_and_fit_roundtrip():
    data = mcure.generate_scenario(scenario=1, n=300, seed=11)
    res = mcure.fit(
        times=data["times"],
        status=data["status"],
        x=data["x"],
        z_covariates=data["z"][:, 1:],
        intervals=1,
        chains=2,
        iterations=600,
        burnin=200,
        thin=4,
        seed=5,
    )
    assert res["draws"].shape[0] == 2 * (600 - 200) // 4
    assert res["names"][0] == "b0"
    names = {p["name"] for p in res["parameters"]}
    assert {"b0", "b1", "b2", "beta1", "beta2", "lambda1"} <= names
    assert 0.0 < res["uncured_rate"]["mean"] < 1.0
    dev_bar = -2.0 * res["loglik"].mean()
    # DIC = 2 dev_bar - dev(at mean); the plug-in deviance cannot exceed dev_bar
    assert res["criteria"]["dic"] <= 2.0 * dev_bar
    assert np.isfinite(res["criteria"]["looic"])


def test_fit_determinism():
    data = mcure.generate_scenario(scenario=1, n=150, seed=3)
    kwargs = dict(
        times=data["times"],
        status=data["status"],
        x=data["x"],
        z_covariates=data["z"][:, 1:],
        chains=2,
        iterations=300,
        burnin=100,
        thin=5,
        seed=42,
    )
    a = mcure.fit(**kwargs)
    b = mcure.fit(**kwargs)
    assert np.array_equal(a["draws"], b["draws"])


def test_smcfm_has_theta():
    data = mcure.generate_scenario(scenario=1, n=150, seed=4)
    res = mcure.fit(
        times=data["times"],
        status=data["status"],
        x=data["x"],
        z_covariates=data["z"][:, 1:],
        model="smcfm",
        chains=1,
        iterations=300,
        burnin=100,
        thin=5,
        seed=6,
    )
    assert "theta" in res["names"]


def test_diagnostics_helpers():
    rng = np.random.default_rng(0)
    chains = [rng.normal(size=2000) for _ in range(3)]
    assert mcure.psrf(chains) < 1.05
    lo, hi = mcure.hpd_interval(np.arange(1.0, 101.0), 0.95)
    assert hi - lo == pytest.approx(95.0)

    per_obs = np.log(np.array([[1.0], [3.0]]))
    lpml_value, cpo = mcure.lpml(per_obs)
    assert cpo[0] == pytest.approx(1.5)

    u = 0.37
    t = mcure.pe_sample_time(u, 1.0, np.array([0.0]), np.array([2.0]))
    assert t == pytest.approx(-math.log(u) / 2.0)

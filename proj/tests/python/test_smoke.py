"""Smoke tests for the python bindings."""

import os
import sys

import numpy as np
import pytest

sys.path.insert(
    0, os.path.join(os.path.dirname(__file__), "..", "..", "python")
)
netmle = pytest.importorskip("netmle")


def test_normal_quantile():
    assert netmle.normal_quantile(0.975) == pytest.approx(
        1.959963984540054, abs=1e-9
    )


def test_sample_shapes_and_determinism():
    adj1, z1, alpha, beta, gamma = netmle.sample(30, "zero", seed=11)
    adj2, z2, *_ = netmle.sample(30, "zero", seed=11)
    assert adj1.shape == (30, 30)
    assert z1.shape == (900, 2)
    assert np.array_equal(adj1, adj2)
    assert np.array_equal(z1, z2)
    assert np.all(np.diag(adj1) == 0)
    assert alpha.shape == (30,)
    assert beta[-1] == 0.0
    assert list(gamma) == [1.0, 1.5]


def test_fit_recovers_parameters_roughly():
    adj, z, alpha, beta, gamma = netmle.sample(100, "zero", seed=5)
    res = netmle.fit(adj, z)
    assert res["exists"]
    assert res["converged"]
    # n=100 standard errors for gamma are ~0.15
    assert np.all(np.abs(res["gamma"] - gamma) < 0.6)
    assert np.all(res["se_gamma"] > 0)
    assert res["alpha"].shape == (100,)
    assert res["beta"][-1] == 0.0


def test_log_likelihood_matches_numpy_reference():
    adj, z, *_ = netmle.sample(20, "zero", seed=9)
    n = 20
    alpha = np.linspace(-0.3, 0.3, n)
    beta = np.linspace(0.2, -0.2, n)
    beta[-1] = 0.0
    gamma = np.array([0.5, -0.25])
    eta = z @ gamma
    eta = eta.reshape(n, n) + alpha[:, None] + beta[None, :]
    off = ~np.eye(n, dtype=bool)
    ref = float((adj[off] * eta[off]).sum() - np.log1p(np.exp(eta[off])).sum())
    val = netmle.log_likelihood(adj, z, alpha, beta, gamma)
    assert val == pytest.approx(ref, rel=1e-10)


def test_fit_flags_boundary_graphs():
    adj = np.zeros((10, 10), dtype=np.int32)
    z = np.zeros((100, 1))
    res = netmle.fit(adj, z)
    assert not res["exists"]


def test_simulate_campaign_summary():
    res = netmle.simulate(30, "zero", reps=5, seed=2, threads=2)
    assert res["reps"] == 5
    assert res["nonexistent"] == 0
    assert len(res["pairs"]) == 3
    for cell in res["pairs"]:
        assert cell["count"] == 5
        assert 0.0 <= cell["coverage"] <= 100.0
    again = netmle.simulate(30, "zero", reps=5, seed=2, threads=1)
    assert again["pairs"][0]["coverage"] == res["pairs"][0]["coverage"]

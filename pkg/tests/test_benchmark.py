import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpa_pacing.benchmark import (
    FluidBenchmark, SLACK_TOL, discrete_best_bid, dual_objective, regret_estimate, solve_dual,
)
from fpa_pacing.config import DistributionSpec, Family

U01 = DistributionSpec(Family.UNIFORM, 0.0, 1.0)
N04 = DistributionSpec(Family.NORMAL, 0.4, 0.1)
LN = DistributionSpec(Family.LOGNORMAL, -0.4, 0.1)


@pytest.fixture(scope="module")
def uniform_bench():
    return FluidBenchmark(U01, U01)


def closed_form(lam, rho):
    return 1 / (12 * (1 + lam)) + lam * rho


@pytest.mark.parametrize("lam, rho", [(1.0, 1 / 48), (0.0, 1 / 48), (0.5, 0.1), (3.0, 0.01)])
def test_dual_closed_form(uniform_bench, lam, rho):
    assert uniform_bench.objective(lam, rho) == pytest.approx(closed_form(lam, rho), abs=2e-3)


def test_rho_term_is_additive(uniform_bench):
    assert uniform_bench.objective(0.7, 0.0) == pytest.approx(uniform_bench.objective(0.7, 0.05) - 0.035)


def test_negative_multiplier_rejected(uniform_bench):
    with pytest.raises(ValueError):
        uniform_bench.objective(-0.1, 0.1)


@pytest.mark.parametrize("rho", [1 / 48, 1 / 24, 1 / 27])
def test_binding_multiplier(uniform_bench, rho):
    res = uniform_bench.solve(rho)
    assert res.lambda_star == pytest.approx(1 / math.sqrt(12 * rho) - 1, abs=1e-2)
    assert res.binding
    assert res.per_round_value == pytest.approx(closed_form(res.lambda_star, rho), abs=2e-3)


@pytest.mark.parametrize("rho", [1 / 12, 0.2, 1.0])
def test_slack_budget(uniform_bench, rho):
    assert uniform_bench.solve(rho).lambda_star == 0.0


@pytest.mark.parametrize("g", [U01, N04, LN])
def test_rho_vbar_never_binds(g):
    assert solve_dual(DistributionSpec(Family.NORMAL, 0.6, 0.1), g, 1.0).lambda_star == 0.0


@pytest.mark.parametrize("g", [U01, N04, LN])
@pytest.mark.parametrize("rho", [0.01, 0.05, 0.2])
def test_complementary_slackness(g, rho):
    res = solve_dual(DistributionSpec(Family.UNIFORM, 0.25, 1.0), g, rho, bid_grid=400, quad_points=2000)
    assert abs(res.lambda_star * (rho - res.expected_cost)) <= SLACK_TOL
    if res.lambda_star > 1e-4:
        assert res.binding


def test_dual_convex_on_grid():
    bench = FluidBenchmark(DistributionSpec(Family.NORMAL, 0.6, 0.1), N04, bid_grid=300, quad_points=2000)
    lams = np.linspace(0, 5, 41)
    vals = np.array([bench.objective(x, 0.01) for x in lams])
    assert np.all(np.diff(vals, 2) >= -1e-9)


def test_module_level_objective():
    assert dual_objective(0.0, U01, U01, 0.1) == pytest.approx(1 / 12, abs=2e-3)


def test_best_bid_examples():
    bids = np.linspace(0, 1, 1001)[:-1]
    g = U01.competing_cdf(bids)
    assert bids[discrete_best_bid(1.0, g, bids)] == pytest.approx(0.5)
    assert discrete_best_bid(0.0, g, bids) == 0


@pytest.mark.parametrize("g", [U01, N04, LN])
def test_best_bid_monotone_sweep(g):
    bids = np.arange(1000) / 1000
    win = g.competing_cdf(bids)
    picks = [discrete_best_bid(v, win, bids) for v in np.arange(1000) / 1000]
    assert np.all(np.diff(picks) >= 0)


@settings(max_examples=30, deadline=None)
@given(mu=st.floats(0.05, 0.9), sd=st.floats(0.02, 0.5), v1=st.floats(0, 1), v2=st.floats(0, 1))
def test_best_bid_monotone_random_normal(mu, sd, v1, v2):
    bids = np.arange(200) / 200
    win = DistributionSpec(Family.NORMAL, mu, sd).competing_cdf(bids)
    lo, hi = sorted((v1, v2))
    assert discrete_best_bid(lo, win, bids) <= discrete_best_bid(hi, win, bids)


def test_regret_estimate(uniform_bench):
    res = uniform_bench.solve(1 / 48)
    assert regret_estimate(1000 * res.per_round_value, res, 1000) == 0.0
    r1 = regret_estimate(0.05 * 1000, res, 1000)
    assert regret_estimate(0.05 * 2000, res, 2000) == pytest.approx(2 * r1)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import small_config
from fpa_pacing.checks import trace_violations
from fpa_pacing.config import DistributionSpec, Family
from fpa_pacing.full_bidder import BidderHalted, FullBidder, draw_inputs, full_select, run_full
from fpa_pacing.grid import make_grid
from fpa_pacing.reference import naive_full


def history_cum(d, grid):
    return np.array([sum(1 for x in d if b >= x) for b in grid.points], dtype=np.int64)


def test_select_half():
    grid = make_grid(100, 1.0)
    d = [i / 10 for i in range(1, 11)]
    k = full_select(history_cum(d, grid), len(d), grid.points, 1.0, 0.0)
    assert grid.points[k] == 0.5


def test_select_huge_multiplier_bids_zero():
    grid = make_grid(100, 1.0)
    d = [i / 10 for i in range(1, 11)]
    assert full_select(history_cum(d, grid), len(d), grid.points, 1.0, 1e6) == 0


def test_select_tie_goes_low():
    grid = make_grid(4, 1.0)  # bids 0, .25, .5, .75
    # G = 1 at every bid: objective v - b strictly decreasing, except v=0 where all equal -b
    cum = np.array([1, 1, 1, 1], dtype=np.int64)
    assert full_select(cum, 1, grid.points, 0.0, 0.0) == 0
    # G(.25)=1/2, G(.5)=1: (0.75-.25)/2 = .25 and (0.75-.5) = .25 tie
    cum = np.array([0, 1, 2, 2], dtype=np.int64)
    assert full_select(cum, 2, grid.points, 0.75, 0.0) == 1


def test_first_round_bids_zero():
    b = FullBidder(small_config())
    rec = b.run_round(0.7, 0.0)
    assert rec.bid == 0.0 and rec.won
    rec = FullBidder(small_config()).run_round(0.7, 0.1)
    assert not rec.won and rec.reward == 0.0


def test_halts_below_vbar():
    cfg = small_config(horizon=100, budget=1.5)
    b = FullBidder(cfg)
    b.run_round(0.9, 0.5)  # round 1 bids 0 and loses; later rounds bid 0.5 and win
    assert b.run_round(0.9, 0.5).bid == 0.5 and not b.halted
    b.run_round(0.9, 0.5)
    assert b.halted and b.remaining == pytest.approx(0.5)
    with pytest.raises(BidderHalted):
        b.run_round(0.9, 0.0)


def test_stepwise_matches_kernel(full_config):
    values, comps = draw_inputs(full_config, 4)
    bidder = FullBidder(full_config)
    recs = []
    for v, d in zip(values, comps):
        recs.append(bidder.run_round(v, d))
        if bidder.halted:
            break
    trace = run_full(full_config, 4)
    assert trace.tau == len(recs)
    assert [r.bid for r in recs] == list(trace.bid)
    assert [r.lam for r in recs] == list(trace.lam)
    assert list(trace.records()) == recs


def test_deterministic(full_config):
    a, b = run_full(full_config, 9), run_full(full_config, 9)
    assert np.array_equal(a.bid, b.bid) and np.array_equal(a.lam, b.lam)


def test_slack_budget_keeps_multiplier_zero():
    cfg = small_config(horizon=1000, budget=1000.0)
    tr = run_full(cfg, 1)
    assert tr.tau == 1000
    assert np.all(tr.lam == 0) and tr.final_lambda == 0


def test_baseline_equals_unconstrained_run():
    capped = small_config(horizon=1000, budget=1000.0, budget_control=False)
    free = small_config(horizon=1000, budget=1000.0)
    a, b = run_full(capped, 2), run_full(free, 2)
    assert np.array_equal(a.bid, b.bid)


def test_baseline_depletes_early():
    cfg = small_config(horizon=20_000, budget=200.0, bid_grid=100, value_grid=100, budget_control=False)
    tr = run_full(cfg, 0)
    assert tr.tau < cfg.horizon / 2
    after = tr.curve_t > tr.tau
    expected = tr.total_reward / tr.curve_t[after]
    assert np.allclose(tr.curve_rpr[after], expected, rtol=1e-12)


def test_matches_naive_oracle(full_config):
    values, comps = draw_inputs(full_config, 6)
    trace = run_full(full_config, 6, values, comps)
    assert [float(b) for b in trace.bid] == naive_full(full_config, values, comps)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6), rho=st.floats(0.005, 0.5), control=st.booleans(),
       fam=st.sampled_from(["normal", "lognormal", "uniform"]))
def test_invariants(seed, rho, control, fam):
    value = {"normal": DistributionSpec(Family.NORMAL, 0.6, 0.1),
             "lognormal": DistributionSpec(Family.LOGNORMAL, -0.4, 0.1),
             "uniform": DistributionSpec(Family.UNIFORM, 0.25, 1.0)}[fam]
    cfg = small_config(horizon=3000, budget=rho * 3000, value_dist=value, budget_control=control)
    tr = run_full(cfg, seed)
    assert trace_violations(tr, cfg) == []
    assert tr.total_cost == pytest.approx(np.sum(tr.cost))
    rpr = np.cumsum(tr.reward) / tr.t
    idx = tr.curve_t[tr.curve_t <= tr.tau] - 1
    assert np.allclose(tr.curve_rpr[: len(idx)], rpr[idx])

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import VALUE_DISTS, small_config
from fpa_pacing.checks import stepwise_set_violations, trace_violations
from fpa_pacing.config import Feedback
from fpa_pacing.full_bidder import BidderHalted, draw_inputs
from fpa_pacing.grid import make_grid
from fpa_pacing.one_sided import OneSidedBidder, high_reward_filter, run_one_sided, shade_value, update_active_sets
from fpa_pacing.reference import naive_one_sided
from fpa_pacing.selftest import set_update_mismatch


def one_sided(**kw):
    return small_config(feedback=Feedback.ONE_SIDED, **kw)


@pytest.mark.parametrize("v, lam, expected", [(0.63, 0.4, 45), (0.0, 0.0, 0), (1.0, 0.0, 99), (0.5, 0.0, 50)])
def test_shade_value(v, lam, expected):
    assert shade_value(v, lam, make_grid(100, 1.0)) == expected


def test_high_reward_filter_example():
    rewards = np.array([0.10, 0.25, 0.22, 0.05])
    active = np.ones(4, dtype=np.bool_)
    first = high_reward_filter(rewards, active, 0, 0.02)
    assert list(active) == [False, True, True, False]
    assert first == 1


def test_partial_order_filter_example():
    # three value points; sets 0 and 1 already start at bids 2 and 3 (0.20 and 0.30 on a 10-grid)
    bids = make_grid(10, 1.0).points
    vals = np.array([0.0, 0.5, 0.9])
    active = np.ones((3, 10), dtype=np.bool_)
    active[0, :2] = False
    active[1, :3] = False
    infs = np.array([2, 3, 0])
    n = np.full(10, 10**6, dtype=np.int64)
    wins = np.zeros(10, dtype=np.int64)  # every estimate 0: the reward filter keeps everything
    n_min, widths = np.zeros(3, dtype=np.int64), np.zeros(3)
    anomalies, disorder = update_active_sets(active, infs, n_min, widths, n, wins, bids, vals, 1.0, 1.0)
    assert np.flatnonzero(active[2])[0] == 3
    assert list(infs) == [2, 3, 3]
    assert anomalies == 0 and disorder == 0


def test_first_set_has_no_order_constraint():
    bids = make_grid(5, 1.0).points
    active = np.ones((1, 5), dtype=np.bool_)
    infs = np.zeros(1, dtype=np.int64)
    n = np.full(5, 100, dtype=np.int64)
    wins = np.full(5, 100, dtype=np.int64)
    update_active_sets(active, infs, np.zeros(1, np.int64), np.zeros(1), n, wins, bids, np.array([0.3]), 1e-6, 1.0)
    # r = 0.3 - b, so only bid 0 survives a near-zero width
    assert list(np.flatnonzero(active[0])) == [0]


def test_untouched_sets_bid_zero():
    b = OneSidedBidder(one_sided())
    assert b.select_bid(7) == 0
    assert b.run_round(0.8, 0.3).bid == 0.0


def test_winning_rounds_leave_no_trace_of_d():
    cfg = one_sided()
    a, b = OneSidedBidder(cfg), OneSidedBidder(cfg)
    a.run_round(0.7, 0.0)
    b.run_round(0.7, 0.0)
    a.run_round(0.7, 0.0)
    b.run_round(0.7, -1.0)  # different competing bid, same (won) outcome
    assert np.array_equal(a.estimator.n_counts, b.estimator.n_counts)
    assert np.array_equal(a.estimator.win_counts, b.estimator.win_counts)


def test_baseline_keeps_multiplier_zero():
    tr = run_one_sided(one_sided(budget_control=False), 3)
    assert np.all(tr.lam == 0)
    later = np.arange(len(tr.t)) >= 1
    vgrid = make_grid(20, 1.0)
    assert np.all(tr.shaded[later] == vgrid.points[[shade_value(v, 0.0, vgrid) for v in tr.value[later]]])


def test_stepwise_matches_kernel(one_sided_config):
    values, comps = draw_inputs(one_sided_config, 5)
    bidder = OneSidedBidder(one_sided_config)
    recs = []
    for v, d in zip(values, comps):
        recs.append(bidder.run_round(v, d))
        if bidder.halted:
            break
    tr = run_one_sided(one_sided_config, 5)
    assert tr.tau == len(recs)
    kernel = list(tr.records())
    for r, k in zip(recs, kernel):
        assert (r.bid, r.lam, r.won, r.n_min) == (k.bid, k.lam, k.won, k.n_min)
        assert (math.isnan(r.width) and math.isnan(k.width)) or r.width == k.width
    with pytest.raises(BidderHalted):
        halted = OneSidedBidder(one_sided(horizon=10, budget=1.0))
        halted.remaining = 0.0
        halted.halted = True
        halted.run_round(0.5, 0.1)


def test_deterministic(one_sided_config):
    a, b = run_one_sided(one_sided_config, 8), run_one_sided(one_sided_config, 8)
    assert np.array_equal(a.bid, b.bid) and np.array_equal(a.n_min, b.n_min)


def test_matches_naive_oracle(one_sided_config):
    values, comps = draw_inputs(one_sided_config, 2)
    tr = run_one_sided(one_sided_config, 2, values, comps)
    assert [float(b) for b in tr.bid] == naive_one_sided(one_sided_config, values, comps)


def test_matches_naive_with_elimination():
    # widths shrink like N^-1/2; at this horizon several sets lose bids before the end
    cfg = one_sided(horizon=12_000, budget=2400.0, bid_grid=8, value_grid=8, failure_prob=0.999,
                    value_dist=VALUE_DISTS["uniform"])
    values, comps = draw_inputs(cfg, 0)
    bidder = OneSidedBidder(cfg)
    for v, d in zip(values, comps):
        bidder.run_round(v, d)
    assert bidder.sets.active.sum() < 8 * 8
    tr = run_one_sided(cfg, 0, values, comps)
    assert [float(b) for b in tr.bid] == naive_one_sided(cfg, values, comps)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_set_update_matches_oracle(seed):
    assert set_update_mismatch(np.random.default_rng(seed)) is None


def test_sets_shrink_and_stay_ordered():
    cfg = one_sided(horizon=3000, budget=30.0, value_dist=VALUE_DISTS["uniform"], failure_prob=0.5)
    assert stepwise_set_violations(cfg, 1) == []


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10**6), rho=st.floats(0.005, 0.3), control=st.booleans(),
       fam=st.sampled_from(sorted(VALUE_DISTS)))
def test_invariants(seed, rho, control, fam):
    cfg = one_sided(horizon=2000, budget=rho * 2000, value_dist=VALUE_DISTS[fam], budget_control=control)
    tr = run_one_sided(cfg, seed)
    assert trace_violations(tr, cfg) == []
    later = tr.t >= 2
    assert np.all(tr.n_min[later] >= 1)
    assert np.all(tr.width[later] > 0)

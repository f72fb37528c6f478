"""Budget-paced bidding when only losers see the maximum competing bid.

Each value-grid point ``v^m`` keeps an active set of candidate bids. Every
round, for ``m`` in ascending order, the set first drops bids below the
largest infimum among the already-updated sets of smaller ``m``. It then
drops bids whose estimated reward falls more than twice the confidence width
below the best surviving estimate. The bidder shades its value by
``1 + lam``, floors it onto the value grid and bids the smallest surviving
bid of that set.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numba import njit

from .config import ExperimentConfig, Feedback
from .estimators import OneSidedEstimator, azuma_log_term, one_observe_counts
from .full_bidder import BidderHalted, check_lambda_cap, draw_inputs
from .grid import floor_index, grid_floor, make_grid
from .pacing import DualController
from .trace import RoundRecord, Trace, build_trace

log = logging.getLogger(__name__)


@njit(cache=True)
def high_reward_filter(rewards, active, start, width):
    """Deactivate bids with reward below ``max - 2 * width``; return the new infimum."""
    size = rewards.shape[0]
    rmax = -np.inf
    for k in range(start, size):
        if active[k] and rewards[k] > rmax:
            rmax = rewards[k]
    thr = rmax - 2.0 * width
    first = -1
    for k in range(start, size):
        if active[k]:
            if rewards[k] < thr:
                active[k] = False
            elif first < 0:
                first = k
    return first


@njit(cache=True)
def update_active_sets(active, infs, n_min, widths, n_counts, win_counts,
                       bid_points, value_points, log_term, vbar):
    """One round of eliminations over all value-grid points, in place.

    Returns ``(anomalies, order_violations)``. An anomaly is a set emptied by
    the partial-order filter; it keeps its single best pre-filter bid instead.
    """
    size = bid_points.shape[0]
    n_values = value_points.shape[0]
    ratio = np.empty(size)
    for k in range(size):
        ratio[k] = win_counts[k] / n_counts[k] if n_counts[k] > 0 else 0.0
    rewards = np.empty(size)
    floor = 0
    anomalies = 0
    order_violations = 0
    for m in range(n_values):
        row = active[m]
        vm = value_points[m]
        start = infs[m]
        first = -1
        for k in range(start, size):
            if row[k] and k >= floor:
                first = k
                break
        if first < 0:
            best = -np.inf
            best_k = start
            for k in range(start, size):
                if row[k]:
                    r = ratio[k] * (vm - bid_points[k])
                    if r > best:
                        best = r
                        best_k = k
                    row[k] = False
            row[best_k] = True
            first = best_k
            anomalies += 1
        else:
            for k in range(start, first):
                row[k] = False
        # n_counts is non-decreasing in k, so the minimum sits at the infimum
        n = n_counts[first]
        w = vbar * math.sqrt(log_term / n)
        for k in range(first, size):
            if row[k]:
                rewards[k] = ratio[k] * (vm - bid_points[k])
        new_inf = high_reward_filter(rewards, row, first, w)
        infs[m] = new_inf
        n_min[m] = n
        widths[m] = w
        if new_inf < floor:
            order_violations += 1
        else:
            floor = new_inf
    return anomalies, order_violations


class ActiveSets:
    """Surviving bid indices per value-grid point, as an ``(M, K)`` mask."""

    def __init__(self, n_values: int, n_bids: int):
        self.active = np.ones((n_values, n_bids), dtype=np.bool_)
        self.infs = np.zeros(n_values, dtype=np.int64)
        self.n_min = np.zeros(n_values, dtype=np.int64)
        self.widths = np.full(n_values, np.nan)
        self.anomalies = 0
        self.order_violations = 0

    def update(self, estimator: OneSidedEstimator, value_points, log_term: float, vbar: float):
        a, o = update_active_sets(self.active, self.infs, self.n_min, self.widths,
                                  estimator.n_counts, estimator.win_counts,
                                  estimator.grid.points, value_points, log_term, vbar)
        if a:
            log.warning("%d active set(s) emptied by the partial-order filter; kept best bid", a)
        self.anomalies += a
        self.order_violations += o

    def members(self, m: int) -> np.ndarray:
        return np.flatnonzero(self.active[m])


def shade_value(v: float, lam: float, value_grid) -> int:
    """Value-grid index of ``v / (1 + lam)``."""
    return floor_index(value_grid, v / (1.0 + lam))


class OneSidedBidder:
    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.grid = make_grid(config.bid_grid, config.value_bound)
        self.value_grid = make_grid(config.value_grid, config.value_bound)
        self.estimator = OneSidedEstimator(self.grid)
        self.controller = DualController(config.step_size, config.rho)
        self.sets = ActiveSets(config.value_grid, config.bid_grid)
        self.log_term = azuma_log_term(config.horizon, config.bid_grid, config.failure_prob)
        self.remaining = config.budget
        self.t = 1
        self.halted = False

    @property
    def lam(self) -> float:
        return self.controller.lam

    def select_bid(self, m: int) -> int:
        return int(self.sets.infs[m])

    def run_round(self, v: float, d: float) -> RoundRecord:
        if self.halted:
            raise BidderHalted(f"budget below {self.config.value_bound} after round {self.t - 1}")
        lam = self.lam
        shaded, n, width = float("nan"), 0, float("nan")
        if self.t == 1:
            k = 0
        else:
            self.sets.update(self.estimator, self.value_grid.points, self.log_term, self.config.value_bound)
            m = shade_value(v, lam, self.value_grid)
            k = self.select_bid(m)
            shaded, n, width = float(self.value_grid.points[m]), int(self.sets.n_min[m]), float(self.sets.widths[m])
            if self.config.budget_control:
                self.controller.update(self.estimator.estimates(v, k)[1])
        b = float(self.grid.points[k])
        won = b >= d
        self.estimator.observe(k, won, None if won else d)
        cost = b if won else 0.0
        self.remaining -= cost
        rec = RoundRecord(self.t, float(v), lam, b, won, (v - b) if won else 0.0, cost,
                          self.remaining, shaded, n, width)
        self.t += 1
        if self.remaining < self.config.value_bound:
            self.halted = True
        return rec


@njit(cache=True)
def _simulate_one_sided(values, comps, bid_points, value_points, vbar, budget, eps, rho,
                        control, log_term):
    horizon = values.shape[0]
    size = bid_points.shape[0]
    n_values = value_points.shape[0]
    n_counts = np.zeros(size, dtype=np.int64)
    win_counts = np.zeros(size, dtype=np.int64)
    active = np.ones((n_values, size), dtype=np.bool_)
    infs = np.zeros(n_values, dtype=np.int64)
    n_min = np.zeros(n_values, dtype=np.int64)
    widths = np.full(n_values, np.nan)

    bid_idx = np.empty(horizon, dtype=np.int64)
    lams = np.empty(horizon)
    won = np.empty(horizon, dtype=np.bool_)
    left = np.empty(horizon)
    shaded = np.full(horizon, np.nan)
    rec_n = np.zeros(horizon, dtype=np.int64)
    rec_w = np.full(horizon, np.nan)
    lam = 0.0
    remaining = budget
    played = 0
    anomalies = 0
    order_violations = 0
    for i in range(horizon):
        v = values[i]
        d = comps[i]
        lams[i] = lam
        if i == 0:
            k = 0
        else:
            a, o = update_active_sets(active, infs, n_min, widths, n_counts, win_counts,
                                      bid_points, value_points, log_term, vbar)
            anomalies += a
            order_violations += o
            m = grid_floor(value_points, vbar, v / (1.0 + lam))
            k = infs[m]
            shaded[i] = value_points[m]
            rec_n[i] = n_min[m]
            rec_w[i] = widths[m]
            if control:
                c_est = (win_counts[k] / n_counts[k]) * bid_points[k]
                lam = max(0.0, lam - eps * (rho - c_est))
        b = bid_points[k]
        w = b >= d
        one_observe_counts(n_counts, win_counts, bid_points, vbar, k, w, d)
        if w:
            remaining -= b
        bid_idx[i] = k
        won[i] = w
        left[i] = remaining
        played = i + 1
        if remaining < vbar:
            break
    return (played, bid_idx[:played], lams[:played], won[:played], left[:played], lam,
            shaded[:played], rec_n[:played], rec_w[:played], anomalies, order_violations)


def run_one_sided(config: ExperimentConfig, seed: int, values=None, comps=None) -> Trace:
    if values is None:
        values, comps = draw_inputs(config, seed)
    grid = make_grid(config.bid_grid, config.value_bound)
    vgrid = make_grid(config.value_grid, config.value_bound)
    log_term = azuma_log_term(config.horizon, config.bid_grid, config.failure_prob)
    (played, idx, lams, won, left, final_lam, shaded, n_min, width,
     anomalies, order_violations) = _simulate_one_sided(
        np.ascontiguousarray(values, dtype=float), np.ascontiguousarray(comps, dtype=float),
        np.array(grid.points), np.array(vgrid.points), config.value_bound, config.budget,
        config.step_size, config.rho, config.budget_control, log_term)
    if anomalies:
        log.warning("seed %d: %d active set(s) emptied by the partial-order filter", seed, anomalies)
    check_lambda_cap(config, max(float(lams.max()), final_lam), strict=False)
    return build_trace(
        horizon=config.horizon, budget=config.budget, seed=seed, feedback=Feedback.ONE_SIDED.value,
        stride=config.log_stride, values=values, lam=lams, bid=grid.points[idx], won=won,
        budget_left=left, final_lambda=final_lam, shaded=shaded, n_min=n_min, width=width,
        anomalies=anomalies, order_violations=order_violations)


"""Budget-paced bidding when the maximum competing bid is always revealed."""

from __future__ import annotations

import logging

import numpy as np
from numba import njit

from .config import ExperimentConfig, Feedback, make_streams, sample_competing_bids, sample_values
from .estimators import FullInfoEstimator, full_observe_counts
from .grid import make_grid
from .pacing import DualController
from .trace import RoundRecord, Trace, build_trace

log = logging.getLogger(__name__)

LAMBDA_SLACK = 1e-9


class LambdaBoundError(AssertionError):
    pass


class BidderHalted(RuntimeError):
    pass


@njit(cache=True)
def full_select(cum, n_obs, points, v, lam):
    """Smallest grid index maximizing ``r~ - lam * c~``."""
    best = -np.inf
    best_k = 0
    for k in range(points.shape[0]):
        g = cum[k] / n_obs
        b = points[k]
        obj = g * (v - b) - lam * (g * b)
        if obj > best:
            best = obj
            best_k = k
    return best_k


@njit(cache=True)
def _simulate_full(values, comps, points, vbar, budget, eps, rho, control):
    horizon = values.shape[0]
    size = points.shape[0]
    cum = np.zeros(size, dtype=np.int64)
    bid_idx = np.empty(horizon, dtype=np.int64)
    lams = np.empty(horizon)
    won = np.empty(horizon, dtype=np.bool_)
    left = np.empty(horizon)
    lam = 0.0
    remaining = budget
    played = 0
    for i in range(horizon):
        v = values[i]
        d = comps[i]
        lams[i] = lam
        if i == 0:
            k = 0
        else:
            k = full_select(cum, i, points, v, lam)
            if control:
                c_est = (cum[k] / i) * points[k]
                lam = max(0.0, lam - eps * (rho - c_est))
        b = points[k]
        w = b >= d
        full_observe_counts(cum, points, vbar, d)
        if w:
            remaining -= b
        bid_idx[i] = k
        won[i] = w
        left[i] = remaining
        played = i + 1
        if remaining < vbar:
            break
    return played, bid_idx[:played], lams[:played], won[:played], left[:played], lam


class FullBidder:
    """Step-by-step full-feedback bidder.

    Round 1 bids 0. From round 2 on, the bid maximizes the estimated reward
    minus ``lam`` times the estimated cost over the bid grid. The multiplier
    then moves by the estimated cost of the chosen bid, and only after that
    is the round's competing bid observed. Without budget control ``lam``
    stays at 0.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.grid = make_grid(config.bid_grid, config.value_bound)
        self.estimator = FullInfoEstimator(self.grid)
        self.controller = DualController(config.step_size, config.rho)
        self.remaining = config.budget
        self.t = 1
        self.halted = False

    @property
    def lam(self) -> float:
        return self.controller.lam

    def select_bid(self, v: float) -> int:
        lam = self.lam if self.config.budget_control else 0.0
        return int(full_select(self.estimator.cum_counts, self.estimator.rounds_observed,
                               self.grid.points, float(v), lam))

    def run_round(self, v: float, d: float) -> RoundRecord:
        if self.halted:
            raise BidderHalted(f"budget below {self.config.value_bound} after round {self.t - 1}")
        lam = self.lam
        if self.t == 1:
            k = 0
        else:
            k = self.select_bid(v)
            if self.config.budget_control:
                self.controller.update(self.estimator.estimates(v, k)[1])
        b = float(self.grid.points[k])
        won = b >= d
        self.estimator.observe(d)
        cost = b if won else 0.0
        self.remaining -= cost
        rec = RoundRecord(self.t, float(v), lam, b, won, (v - b) if won else 0.0, cost, self.remaining)
        self.t += 1
        if self.remaining < self.config.value_bound:
            self.halted = True
        return rec


def check_lambda_cap(config: ExperimentConfig, max_lam: float, strict: bool) -> None:
    if not config.budget_control or config.step_size >= 1.0 / config.rho:
        return
    cap = config.value_bound / config.rho - 1.0
    if max_lam > cap + LAMBDA_SLACK:
        msg = f"multiplier reached {max_lam:.6g} > vbar/rho - 1 = {cap:.6g}"
        if strict:
            raise LambdaBoundError(msg)
        log.warning(msg)


def draw_inputs(config: ExperimentConfig, seed: int) -> tuple[np.ndarray, np.ndarray]:
    value_rng, comp_rng = make_streams(seed)
    values = sample_values(config.value_dist, config.value_bound, value_rng, config.horizon)
    comps = sample_competing_bids(config.competing_dist, comp_rng, config.horizon)
    return values, comps


def run_full(config: ExperimentConfig, seed: int, values=None, comps=None) -> Trace:
    """Simulate one full-feedback run; inputs are drawn from ``seed`` unless given."""
    if values is None:
        values, comps = draw_inputs(config, seed)
    grid = make_grid(config.bid_grid, config.value_bound)
    played, idx, lams, won, left, final_lam = _simulate_full(
        np.ascontiguousarray(values, dtype=float), np.ascontiguousarray(comps, dtype=float),
        np.array(grid.points), config.value_bound, config.budget, config.step_size, config.rho,
        config.budget_control)
    check_lambda_cap(config, max(float(lams.max()), final_lam), strict=True)
    return build_trace(
        horizon=config.horizon, budget=config.budget, seed=seed, feedback=Feedback.FULL.value,
        stride=config.log_stride, values=values, lam=lams, bid=grid.points[idx], won=won,
        budget_left=left, final_lambda=final_lam)

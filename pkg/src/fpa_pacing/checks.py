"""Invariant checks on simulated runs, shared by the test suite and ``selftest``."""

from __future__ import annotations

import numpy as np

from .config import ExperimentConfig
from .full_bidder import draw_inputs
from .one_sided import OneSidedBidder
from .trace import Trace

LAMBDA_SLACK = 1e-9
COUNT_SAMPLES = 200


def trace_violations(trace: Trace, config: ExperimentConfig, count_samples: int = COUNT_SAMPLES) -> list[str]:
    """Human-readable descriptions of every invariant the trace breaks."""
    bad = []
    if trace.total_cost > config.budget * (1 + 1e-12):
        bad.append(f"spent {trace.total_cost} > budget {config.budget}")
    if np.any(trace.lam < 0) or trace.final_lambda < 0:
        bad.append("negative multiplier")

    if not trace.one_sided:
        if config.budget_control and config.step_size < 1.0 / config.rho:
            cap = config.value_bound / config.rho - 1.0
            top = max(float(trace.lam.max()), trace.final_lambda)
            if top > cap + LAMBDA_SLACK:
                bad.append(f"multiplier {top} above vbar/rho - 1 = {cap}")
        step = config.value_bound / config.bid_grid
        later = trace.t >= 2
        over = trace.bid[later] > trace.value[later] / (1.0 + trace.lam[later]) + step
        if np.any(over):
            bad.append(f"{int(over.sum())} bids above v/(1+lam) + grid step")
        return bad

    if trace.order_violations:
        bad.append(f"{trace.order_violations} rounds with decreasing active-set infima")
    if trace.anomalies:
        bad.append(f"{trace.anomalies} active sets emptied by partial-order elimination")
    if trace.full_resolution and trace.tau > 2:
        bad += count_bound_violations(trace, count_samples)
    return bad


def count_bound_violations(trace: Trace, samples: int = COUNT_SAMPLES, rng_seed: int = 0) -> list[str]:
    """``N_t >= 1 + #{2 <= s < t : shaded_s <= shaded_t}`` on sampled rounds."""
    shaded = trace.value / (1.0 + trace.lam)
    rounds = np.arange(2, trace.tau + 1)
    if len(rounds) > samples:
        rounds = np.sort(np.random.default_rng(rng_seed).choice(rounds, samples, replace=False))
    bad = []
    for t in rounds:
        past = shaded[1:t - 1]
        need = 1 + int(np.count_nonzero(past <= shaded[t - 1]))
        if trace.n_min[t - 1] < need:
            bad.append(f"round {t}: N={trace.n_min[t - 1]} < {need}")
    return bad


def stepwise_set_violations(config: ExperimentConfig, seed: int) -> list[str]:
    """Replay a one-sided run round by round, checking shrinkage and ordered infima."""
    values, comps = draw_inputs(config, seed)
    bidder = OneSidedBidder(config)
    prev = bidder.sets.active.copy()
    bad = []
    for v, d in zip(values, comps):
        bidder.run_round(v, d)
        cur = bidder.sets.active
        if np.any(cur & ~prev):
            bad.append(f"round {bidder.t - 1}: an active set grew")
        if bidder.t > 2 and np.any(np.diff(bidder.sets.infs) < 0):
            bad.append(f"round {bidder.t - 1}: infima not ordered")
        if not cur.any(axis=1).all():
            bad.append(f"round {bidder.t - 1}: empty active set")
        prev = cur.copy()
        if bidder.halted:
            break
    return bad

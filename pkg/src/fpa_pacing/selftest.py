"""Small-scale oracle-equivalence and invariant suite behind ``fpa-pacing selftest``."""

from __future__ import annotations

import math
import time

import numpy as np

from .checks import stepwise_set_violations, trace_violations
from .config import DistributionSpec, ExperimentConfig, Family, Feedback
from .full_bidder import draw_inputs, run_full
from .one_sided import run_one_sided, update_active_sets
from .reference import naive_full, naive_one_sided, naive_update_sets

_VALUE_DISTS = [
    DistributionSpec(Family.NORMAL, 0.6, 0.1),
    DistributionSpec(Family.LOGNORMAL, -0.4, 0.1),
    DistributionSpec(Family.UNIFORM, 0.25, 1.0),
    DistributionSpec(Family.UNIFORM, 0.0, 1.0),
]
_COMPETING_DISTS = [
    DistributionSpec(Family.NORMAL, 0.4, 0.1),
    DistributionSpec(Family.UNIFORM, 0.0, 1.0),
    DistributionSpec(Family.LOGNORMAL, -1.0, 0.3),
    DistributionSpec(Family.NORMAL, 0.2, 0.2),
]


def random_small_config(rng: np.random.Generator, max_horizon: int = 2000, max_grid: int = 20,
                        feedback: Feedback | None = None) -> ExperimentConfig:
    horizon = int(rng.integers(50, max_horizon + 1))
    grid = int(rng.integers(2, max_grid + 1))
    rho = float(np.exp(rng.uniform(math.log(0.005), math.log(1.0))))
    return ExperimentConfig(
        horizon=horizon,
        budget=rho * horizon,
        value_dist=_VALUE_DISTS[rng.integers(len(_VALUE_DISTS))],
        competing_dist=_COMPETING_DISTS[rng.integers(len(_COMPETING_DISTS))],
        bid_grid=grid,
        value_grid=grid,
        step_size=float(rng.choice([1.0 / math.sqrt(horizon), 0.05, 0.5])),
        failure_prob=float(rng.choice([0.01, 0.1, 0.5])),
        budget_control=bool(rng.integers(2)),
        feedback=feedback or (Feedback.FULL if rng.integers(2) else Feedback.ONE_SIDED),
        repetitions=1,
        seed=int(rng.integers(2**32)),
        log_stride=100,
    )


def oracle_mismatch(config: ExperimentConfig) -> str | None:
    """Compare the fast bidder against the naive one on the config's seed."""
    values, comps = draw_inputs(config, config.seed)
    if config.feedback is Feedback.FULL:
        fast = run_full(config, config.seed, values, comps)
        slow = naive_full(config, values, comps)
    else:
        fast = run_one_sided(config, config.seed, values, comps)
        slow = naive_one_sided(config, values, comps)
    fast_bids = [float(b) for b in fast.bid]
    if fast_bids == slow:
        return None
    n = min(len(fast_bids), len(slow))
    first = next((i for i in range(n) if fast_bids[i] != slow[i]), n)
    return (f"{config.feedback.value} T={config.horizon} K={config.bid_grid} seed={config.seed}: "
            f"bid sequences diverge at round {first + 1}")


def set_update_mismatch(rng: np.random.Generator) -> str | None:
    """Kernel vs. naive elimination on a random state with narrow widths."""
    K = int(rng.integers(2, 16))
    M = int(rng.integers(2, 16))
    bids = [k / K for k in range(K)]
    vals = [m / M for m in range(M)]
    n = np.cumsum(rng.integers(0, 30, K)) + 1
    wins = np.minimum(n, np.cumsum(rng.integers(0, 25, K)))
    log_term = float(rng.choice([1e-4, 1e-2, 0.5, 5.0]))
    active = rng.random((M, K)) < 0.8
    active[np.arange(M), rng.integers(0, K, M)] = True
    sets = [set(np.flatnonzero(row).tolist()) for row in active]
    infs = np.array([min(s) for s in sets], dtype=np.int64)

    width = lambda N: 1.0 * math.sqrt(log_term / N)
    naive_update_sets(sets, [int(x) for x in n], [int(x) for x in wins], bids, vals, width)
    n_min = np.zeros(M, dtype=np.int64)
    widths = np.zeros(M)
    update_active_sets(active, infs, n_min, widths, n.astype(np.int64), wins.astype(np.int64),
                       np.array(bids), np.array(vals), log_term, 1.0)
    got = [set(np.flatnonzero(row).tolist()) for row in active]
    return None if got == sets else f"set update differs (K={K}, M={M}, log_term={log_term})"


def run_selftest(n_configs: int = 12, seed: int = 0, verbose=print) -> list[str]:
    rng = np.random.default_rng(seed)
    failures = []
    start = time.perf_counter()
    for _ in range(n_configs):
        cfg = random_small_config(rng, max_horizon=600, max_grid=12)
        msg = oracle_mismatch(cfg)
        if msg:
            failures.append(msg)
        trace = run_one_sided(cfg, cfg.seed) if cfg.feedback is Feedback.ONE_SIDED else run_full(cfg, cfg.seed)
        failures += [f"{cfg.feedback.value} seed={cfg.seed}: {b}" for b in trace_violations(trace, cfg)]
    verbose(f"run-level oracle equivalence + invariants: {n_configs} configs")
    for _ in range(200):
        msg = set_update_mismatch(rng)
        if msg:
            failures.append(msg)
    verbose("elimination oracle: 200 random states")
    cfg = ExperimentConfig(horizon=3000, budget=30.0, value_dist=_VALUE_DISTS[2],
                           competing_dist=_COMPETING_DISTS[0], bid_grid=20, value_grid=20,
                           feedback=Feedback.ONE_SIDED, failure_prob=0.5)
    failures += stepwise_set_violations(cfg, 1)
    verbose(f"stepwise active-set checks; {time.perf_counter() - start:.1f}s total")
    return failures

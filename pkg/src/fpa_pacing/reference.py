"""Literal, slow re-implementations of both bidders.

Every round recomputes all counts from the raw round log and keeps the active
sets as Python sets. They exist to cross-check the fast kernels and are only
practical for small horizons and grids.
"""

from __future__ import annotations

import numpy as np

from .config import ExperimentConfig
from .estimators import azuma_width


def _grid(size: int, vbar: float) -> list[float]:
    return [k * vbar / size for k in range(size)]


def naive_full(config: ExperimentConfig, values, comps) -> list[float]:
    """Bid sequence of the full-feedback bidder, recomputed from the log."""
    vbar, rho, eps = config.value_bound, config.rho, config.step_size
    bids = _grid(config.bid_grid, vbar)
    seen = np.empty(config.horizon)
    lam = 0.0
    budget = config.budget
    out = []
    for t in range(1, config.horizon + 1):
        v, d = float(values[t - 1]), float(comps[t - 1])
        if t == 1:
            b = 0.0
        else:
            hist = seen[:t - 1]
            best, b, c_best = None, None, None
            for bk in bids:
                g = np.count_nonzero(bk >= hist) / (t - 1)
                r, c = g * (v - bk), g * bk
                obj = r - (lam if config.budget_control else 0.0) * c
                if best is None or obj > best:
                    best, b, c_best = obj, bk, c
            if config.budget_control:
                lam = max(0.0, lam - eps * (rho - c_best))
        seen[t - 1] = d
        out.append(b)
        if b >= d:
            budget -= b
        if budget < vbar:
            break
    return out


def naive_one_sided(config: ExperimentConfig, values, comps) -> list[float]:
    """Bid sequence of the one-sided bidder, recomputed from the censored log."""
    vbar, rho, eps = config.value_bound, config.rho, config.step_size
    K, M, T, delta = config.bid_grid, config.value_grid, config.horizon, config.failure_prob
    bids = _grid(K, vbar)
    vals = _grid(M, vbar)
    sets = [set(range(K)) for _ in range(M)]
    log_b, log_won, log_d = [], [], []
    lam = 0.0
    budget = config.budget
    out = []
    for t in range(1, T + 1):
        v, d = float(values[t - 1]), float(comps[t - 1])
        if t == 1:
            k_bid = 0
        else:
            b_arr = np.array(log_b)
            won_arr = np.array(log_won)
            d_arr = np.array(log_d)
            n, wins = [], []
            for bk in bids:
                below = b_arr <= bk
                n.append(int(np.count_nonzero(below)))
                wins.append(int(np.count_nonzero(below & (won_arr | (d_arr <= bk)))))

            width = lambda N: azuma_width(N, T, K, delta, vbar)
            naive_update_sets(sets, n, wins, bids, vals, width)
            shaded = v / (1.0 + lam)
            m_t = max(j for j in range(M) if vals[j] <= shaded)
            k_bid = min(sets[m_t])
            if config.budget_control:
                c = wins[k_bid] / n[k_bid] * bids[k_bid]
                lam = max(0.0, lam - eps * (rho - c))
        b = bids[k_bid]
        won = b >= d
        log_b.append(b)
        log_won.append(won)
        log_d.append(np.nan if won else d)
        out.append(b)
        if won:
            budget -= b
        if budget < vbar:
            break
    return out


def naive_update_sets(sets, n, wins, bids, vals, width):
    """One round of both eliminations on a list of Python sets, in place.

    ``width`` maps the minimum count of a set to its confidence width.
    Returns the per-set minimum counts.
    """
    def r_est(m, k):
        return wins[k] / n[k] * (vals[m] - bids[k])

    mins = []
    for m in range(len(sets)):
        pre = set(sets[m])
        if m > 0:
            lo = max(bids[min(sets[s])] for s in range(m))
            sets[m] = {k for k in sets[m] if bids[k] >= lo}
        if not sets[m]:
            top = max(r_est(m, k) for k in pre)
            sets[m] = {min(k for k in pre if r_est(m, k) == top)}
        N = min(n[k] for k in sets[m])
        w = width(N)
        rmax = max(r_est(m, k) for k in sets[m])
        sets[m] = {k for k in sets[m] if r_est(m, k) >= rmax - 2 * w}
        mins.append(N)
    return mins

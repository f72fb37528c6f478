"""Reward/cost estimators for the two feedback models and their confidence widths.

Both estimators keep integer tallies over the bid grid and compute ratios on
demand, so their state is exactly (counts, rounds observed).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .grid import Grid, first_at_least


def dkw_bound(t: int, horizon: int, delta: float, vbar: float) -> float:
    """Uniform estimation error bound for full feedback at round ``t >= 2``."""
    if t < 2:
        raise ValueError(f"dkw_bound needs t >= 2, got {t}")
    return vbar * math.sqrt(math.log(2 * horizon / delta) / (2 * (t - 1)))


def azuma_log_term(horizon: int, k: int, delta: float) -> float:
    """The ``4 ln T ln(KT/delta)`` numerator shared by every width in a run."""
    return 4.0 * math.log(horizon) * math.log(k * horizon / delta)


def azuma_width(n: int, horizon: int, k: int, delta: float, vbar: float) -> float:
    """Confidence width for one-sided estimates backed by ``n`` observations."""
    if n < 1:
        raise ValueError("azuma_width needs n >= 1")
    if horizon < 2:
        raise ValueError("azuma_width needs horizon >= 2")
    return vbar * math.sqrt(azuma_log_term(horizon, k, delta) / n)


@njit(cache=True)
def full_observe_counts(cum, points, vbar, d):
    j = first_at_least(points, vbar, d)
    for k in range(j, cum.shape[0]):
        cum[k] += 1


@njit(cache=True)
def one_observe_counts(n_counts, win_counts, points, vbar, bid_index, won, d):
    size = n_counts.shape[0]
    for k in range(bid_index, size):
        n_counts[k] += 1
    if won:
        start = bid_index
    else:
        start = first_at_least(points, vbar, d)
        if start < bid_index:
            start = bid_index
    for k in range(start, size):
        win_counts[k] += 1


class FullInfoEstimator:
    """Empirical CDF of observed competing bids, evaluated on the bid grid.

    ``bucket_counts[i]`` tallies bids in ``(points[i-1], points[i]]`` with the
    last bucket collecting everything above the top grid point, so the prefix
    sum at ``k`` is ``#{s : d_s <= b^k}``.
    """

    def __init__(self, grid: Grid):
        self.grid = grid
        self.bucket_counts = np.zeros(grid.size + 1, dtype=np.int64)
        self.rounds_observed = 0
        self._cum = np.zeros(grid.size, dtype=np.int64)
        self._dirty = False

    def observe(self, d: float) -> "FullInfoEstimator":
        if d < 0:
            raise ValueError(f"competing bid must be >= 0, got {d}")
        self.bucket_counts[first_at_least(self.grid.points, self.grid.vbar, float(d))] += 1
        self.rounds_observed += 1
        self._dirty = True
        return self

    @property
    def cum_counts(self) -> np.ndarray:
        if self._dirty:
            self._cum = np.cumsum(self.bucket_counts[:-1])
            self._dirty = False
        return self._cum

    def cdf(self) -> np.ndarray:
        """Empirical win probability of every grid bid."""
        self._require_data()
        return self.cum_counts / self.rounds_observed

    def estimates(self, v: float, k: int) -> tuple[float, float]:
        self._require_data()
        g = self.cum_counts[k] / self.rounds_observed
        b = self.grid.points[k]
        return g * (v - b), g * b

    def _require_data(self):
        if self.rounds_observed == 0:
            raise ValueError("no competing bids observed yet")


class OneSidedEstimator:
    """Censoring-aware win tallies.

    ``n_counts[k]`` counts past rounds that bid at or below ``b^k``.
    ``win_counts[k]`` counts those rounds in which ``b^k`` would also have won.
    A win at ``b_s <= b^k`` settles that directly. A loss reveals ``d_s``, so
    the indicator ``b^k >= d_s`` can be evaluated exactly.
    """

    def __init__(self, grid: Grid):
        self.grid = grid
        self.n_counts = np.zeros(grid.size, dtype=np.int64)
        self.win_counts = np.zeros(grid.size, dtype=np.int64)
        self.rounds_observed = 0

    def observe(self, bid_index: int, won: bool, d_if_lost: float | None = None) -> "OneSidedEstimator":
        if won and d_if_lost is not None:
            raise ValueError("a winning round does not reveal the competing bid")
        if not won:
            if d_if_lost is None:
                raise ValueError("a losing round must report the competing bid")
            if not d_if_lost > self.grid.points[bid_index]:
                raise ValueError("a lost round needs d > bid")
        d = -1.0 if won else float(d_if_lost)
        one_observe_counts(self.n_counts, self.win_counts, self.grid.points, self.grid.vbar,
                           int(bid_index), bool(won), d)
        self.rounds_observed += 1
        return self

    def estimates(self, v: float, k: int) -> tuple[float, float, int]:
        n = int(self.n_counts[k])
        if n == 0:
            raise ValueError(f"no observations at or below bid index {k}")
        ratio = self.win_counts[k] / n
        b = self.grid.points[k]
        return ratio * (v - b), ratio * b, n

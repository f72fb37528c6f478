"""Per-round records and whole-run traces."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FULL_RESOLUTION_MAX = 100_000


@dataclass(frozen=True)
class RoundRecord:
    t: int
    value: float
    lam: float
    bid: float
    won: bool
    reward: float
    cost: float
    budget: float  # remaining after the round
    shaded: float = float("nan")  # value-grid point v^{m(t)} (one-sided only)
    n_min: int = 0
    width: float = float("nan")


def checkpoints(horizon: int, stride: int) -> np.ndarray:
    ts = np.arange(stride, horizon + 1, stride, dtype=np.int64)
    if len(ts) == 0 or ts[-1] != horizon:
        ts = np.append(ts, horizon)
    return ts


@dataclass
class Trace:
    """Result of one simulated run.

    Column arrays hold every played round when ``full_resolution`` is set,
    otherwise only the rows at ``log_stride`` multiples (plus the last round).
    The reward-per-round curve is always computed from full-resolution data.
    """

    horizon: int
    budget: float
    seed: int
    feedback: str
    t: np.ndarray
    value: np.ndarray
    lam: np.ndarray
    bid: np.ndarray
    won: np.ndarray
    reward: np.ndarray
    cost: np.ndarray
    budget_left: np.ndarray
    shaded: np.ndarray | None
    n_min: np.ndarray | None
    width: np.ndarray | None
    tau: int
    total_reward: float
    total_cost: float
    final_lambda: float
    curve_t: np.ndarray
    curve_rpr: np.ndarray
    curve_budget: np.ndarray
    curve_lambda: np.ndarray
    full_resolution: bool = True
    fig2_sum: float = float("nan")
    anomalies: int = 0
    order_violations: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def one_sided(self) -> bool:
        return self.shaded is not None

    def record(self, i: int) -> RoundRecord:
        extra = {}
        if self.one_sided:
            extra = dict(shaded=float(self.shaded[i]), n_min=int(self.n_min[i]), width=float(self.width[i]))
        return RoundRecord(int(self.t[i]), float(self.value[i]), float(self.lam[i]), float(self.bid[i]),
                           bool(self.won[i]), float(self.reward[i]), float(self.cost[i]),
                           float(self.budget_left[i]), **extra)

    def records(self):
        return [self.record(i) for i in range(len(self.t))]

    def log_rows(self, stride: int) -> np.ndarray:
        """Row positions of the stride checkpoints within the played rounds."""
        ts = checkpoints(self.tau, stride)
        return np.searchsorted(self.t, ts)

    def compact(self, stride: int) -> "Trace":
        if not self.full_resolution:
            return self
        rows = self.log_rows(stride)
        cols = {}
        for name in ("t", "value", "lam", "bid", "won", "reward", "cost", "budget_left", "shaded", "n_min", "width"):
            arr = getattr(self, name)
            cols[name] = None if arr is None else arr[rows]
        return Trace(**{**self.__dict__, **cols, "full_resolution": False})


def build_trace(*, horizon, budget, seed, feedback, stride, values, lam, bid, won, budget_left,
                final_lambda, shaded=None, n_min=None, width=None, anomalies=0, order_violations=0):
    """Assemble a Trace from full-resolution per-round arrays of the played rounds."""
    tau = len(bid)
    t = np.arange(1, tau + 1, dtype=np.int64)
    value = values[:tau]
    cost = np.where(won, bid, 0.0)
    reward = np.where(won, value - bid, 0.0)
    cum = np.cumsum(reward)
    total_reward = float(cum[-1]) if tau else 0.0

    curve_t = checkpoints(horizon, stride)
    last = np.minimum(curve_t, tau) - 1
    curve_rpr = cum[last] / curve_t
    curve_budget = budget_left[last]
    curve_lambda = lam[last]

    fig2_sum = float("nan")
    if n_min is not None and tau > 1:
        fig2_sum = float(np.sum(1.0 / np.sqrt(n_min[1:].astype(float))))

    trace = Trace(
        horizon=horizon, budget=budget, seed=seed, feedback=feedback,
        t=t, value=value, lam=lam, bid=bid, won=won, reward=reward, cost=cost,
        budget_left=budget_left, shaded=shaded, n_min=n_min, width=width,
        tau=tau, total_reward=total_reward, total_cost=float(np.sum(cost)),
        final_lambda=float(final_lambda),
        curve_t=curve_t, curve_rpr=curve_rpr, curve_budget=curve_budget, curve_lambda=curve_lambda,
        fig2_sum=fig2_sum, anomalies=int(anomalies), order_violations=int(order_violations),
    )
    if horizon > FULL_RESOLUTION_MAX:
        trace = trace.compact(stride)
    return trace

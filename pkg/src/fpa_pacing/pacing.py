"""Projected gradient step on the budget multiplier."""

from __future__ import annotations

from dataclasses import dataclass


def dual_step(lam: float, step: float, rho: float, cost_estimate: float) -> float:
    return max(0.0, lam - step * (rho - cost_estimate))


@dataclass
class DualController:
    """Multiplier ``lam`` pushed up when estimated spend exceeds ``rho``.

    Starts at 0. ``lam <= vbar/rho - 1`` holds for the full-feedback bidder
    whenever ``step < 1/rho``; the bidders check it, the controller does not
    cap it.
    """

    step: float
    rho: float
    lam: float = 0.0

    def update(self, cost_estimate: float) -> float:
        if cost_estimate < 0:
            raise ValueError("cost estimate must be >= 0")
        self.lam = dual_step(self.lam, self.step, self.rho, cost_estimate)
        return self.lam

    def cap(self, vbar: float) -> float:
        return vbar / self.rho - 1.0

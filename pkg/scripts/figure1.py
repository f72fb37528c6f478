"""Reward-per-round curves, budget control vs. none, for three value distributions and both feedback models.

    python scripts/figure1.py --horizon 100000 --reps 20 --out results/figure1
"""

import argparse
import logging
from pathlib import Path

from fpa_pacing.config import DistributionSpec, ExperimentConfig, Family, Feedback
from fpa_pacing.harness import run_experiment, write_figure1_panel

VALUES = {
    "normal": DistributionSpec(Family.NORMAL, 0.6, 0.1),
    "lognormal": DistributionSpec(Family.LOGNORMAL, -0.4, 0.1),
    "uniform": DistributionSpec(Family.UNIFORM, 0.25, 1.0),
}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--budget", type=float, default=None, help="defaults to horizon / 100")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("results/figure1"))
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    budget = args.budget if args.budget is not None else args.horizon / 100
    print("feedback,values,control_rpr,baseline_rpr,control_tau,baseline_tau")
    for fb in Feedback:
        for name, dist in VALUES.items():
            cfg = ExperimentConfig(horizon=args.horizon, budget=budget, value_dist=dist,
                                   competing_dist=DistributionSpec(Family.NORMAL, 0.4, 0.1),
                                   feedback=fb, repetitions=args.reps, seed=args.seed)
            ctrl = run_experiment(cfg, workers=args.workers)
            base = run_experiment(cfg.replace(budget_control=False), workers=args.workers)
            write_figure1_panel(ctrl, base, args.out, f"figure1_{fb.value}_{name}",
                                title=f"{fb.value} feedback, {name} values")
            print(f"{fb.value},{name},{ctrl.final_mean_rpr:.6f},{base.final_mean_rpr:.6f},"
                  f"{ctrl.mean_tau:.0f},{base.mean_tau:.0f}", flush=True)


if __name__ == "__main__":
    main()

"""Weak-duality regret of the full-feedback bidder with uniform values and bids, scaled by sqrt(T) ln T.

    python scripts/regret_trend.py --horizons 1000 10000 100000 --reps 20
"""

import argparse
import math

import numpy as np

from fpa_pacing.benchmark import regret_estimate, solve_dual
from fpa_pacing.config import DistributionSpec, ExperimentConfig, Family
from fpa_pacing.harness import run_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--horizons", type=int, nargs="+", default=[1000, 10_000, 100_000])
    p.add_argument("--rho", type=float, default=1 / 48)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--step-scale", type=float, default=1.0, help="step size = scale / sqrt(T)")
    args = p.parse_args()

    u = DistributionSpec(Family.UNIFORM, 0.0, 1.0)
    bench = solve_dual(u, u, args.rho)
    print(f"# lambda*={bench.lambda_star:.4f} per-round dual value={bench.per_round_value:.5f}")
    print("T,mean_regret,std_regret,scaled,mean_tau_over_T")
    for T in args.horizons:
        cfg = ExperimentConfig(horizon=T, budget=args.rho * T, value_dist=u, competing_dist=u,
                               repetitions=args.reps, step_size=args.step_scale / math.sqrt(T),
                               log_stride=max(1, T // 100))
        out = run_experiment(cfg)
        reg = np.array([regret_estimate(r, bench, T) for r in out.final_rewards])
        print(f"{T},{reg.mean():.3f},{reg.std():.3f},{reg.mean() / (math.sqrt(T) * math.log(T)):.4f},"
              f"{out.mean_tau / T:.3f}", flush=True)


if __name__ == "__main__":
    main()

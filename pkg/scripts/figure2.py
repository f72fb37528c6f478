"""Sum of N^-1/2 for the one-sided bidder against sqrt(T ln T) over a horizon sweep.

    python scripts/figure2.py --tmax 100000 --tstep 20000 --reps 10
"""

import argparse
from pathlib import Path

from fpa_pacing.config import DistributionSpec, ExperimentConfig, Family, Feedback
from fpa_pacing.harness import emit_outputs, figure2_sweep

VALUES = {
    "normal": DistributionSpec(Family.NORMAL, 0.6, 0.1),
    "uniform": DistributionSpec(Family.UNIFORM, 0.25, 1.0),
}


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--tmax", type=int, default=100_000)
    p.add_argument("--tstep", type=int, default=20_000)
    p.add_argument("--rho", type=float, default=0.01)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("results/figure2"))
    args = p.parse_args()

    print("values,T,mean_sum,threshold,pass")
    for name, dist in VALUES.items():
        cfg = ExperimentConfig(horizon=args.tstep, budget=args.rho * args.tstep, value_dist=dist,
                               competing_dist=DistributionSpec(Family.NORMAL, 0.4, 0.1),
                               feedback=Feedback.ONE_SIDED, repetitions=args.reps)
        results = figure2_sweep(cfg, args.tmax, args.tstep, workers=args.workers)
        emit_outputs(results, args.out / name, cfg, svg=True, title=f"one-sided, {name} values")
        for r in results:
            print(f"{name},{r.horizon},{r.mean_sum:.2f},{r.threshold:.2f},{int(r.passed)}", flush=True)


if __name__ == "__main__":
    main()

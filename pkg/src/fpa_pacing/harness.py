"""Repeated seeded experiments, aggregation and file outputs."""

from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .benchmark import BenchmarkResult
from .config import ExperimentConfig, Feedback
from .full_bidder import run_full
from .one_sided import run_one_sided
from .trace import Trace

log = logging.getLogger(__name__)

WORKERS_ENV = "FPA_WORKERS"


class SimulationError(RuntimeError):
    def __init__(self, seed: int, cause: BaseException):
        super().__init__(f"simulation with seed {seed} failed: {cause}")
        self.seed = seed


def simulate(config: ExperimentConfig, seed: int) -> Trace:
    if config.feedback is Feedback.ONE_SIDED:
        return run_one_sided(config, seed)
    return run_full(config, seed)


@dataclass
class AggregateResult:
    checkpoints: np.ndarray
    mean_rpr: np.ndarray
    std_rpr: np.ndarray
    mean_budget: np.ndarray
    mean_lambda: np.ndarray
    mean_tau: float
    seeds: list[int]
    taus: np.ndarray
    final_rewards: np.ndarray
    final_costs: np.ndarray
    fig2_sums: np.ndarray
    traces: list[Trace] | None = None

    @property
    def repetitions(self) -> int:
        return len(self.seeds)

    @property
    def final_mean_rpr(self) -> float:
        return float(self.mean_rpr[-1])


def _order_free_mean_std(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # sorting along the repetition axis makes the reduction order-independent
    s = np.sort(stack, axis=0)
    return s.mean(axis=0), s.std(axis=0)


def aggregate(traces: list[Trace]) -> AggregateResult:
    if not traces:
        raise ValueError("nothing to aggregate")
    cps = traces[0].curve_t
    rpr = np.stack([tr.curve_rpr for tr in traces])
    mean, std = _order_free_mean_std(rpr)
    mean_budget = _order_free_mean_std(np.stack([tr.curve_budget for tr in traces]))[0]
    mean_lambda = _order_free_mean_std(np.stack([tr.curve_lambda for tr in traces]))[0]
    taus = np.array([tr.tau for tr in traces])
    return AggregateResult(
        checkpoints=cps, mean_rpr=mean, std_rpr=std, mean_budget=mean_budget, mean_lambda=mean_lambda,
        mean_tau=float(np.sort(taus).mean()), seeds=[tr.seed for tr in traces], taus=taus,
        final_rewards=np.array([tr.total_reward for tr in traces]),
        final_costs=np.array([tr.total_cost for tr in traces]),
        fig2_sums=np.array([tr.fig2_sum for tr in traces]),
    )


def _worker_count(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, workers)


def _run_checked(config: ExperimentConfig, seed: int, check: bool, keep: bool):
    try:
        trace = simulate(config, seed)
        if check:
            from .checks import trace_violations
            bad = trace_violations(trace, config)
            if bad:
                raise AssertionError("; ".join(bad))
    except Exception as exc:
        raise SimulationError(seed, exc) from exc
    return trace if keep else trace.compact(config.log_stride)


def run_experiment(config: ExperimentConfig, *, workers: int | None = None,
                   check_invariants: bool = False, keep_traces: bool = False) -> AggregateResult:
    """Run ``config.repetitions`` seeded simulations (seeds ``seed + i``) and aggregate."""
    seeds = [config.seed + i for i in range(config.repetitions)]
    n = _worker_count(workers)
    if n == 1:
        traces = [_run_checked(config, s, check_invariants, keep_traces) for s in seeds]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            futures = [pool.submit(_run_checked, config, s, check_invariants, keep_traces) for s in seeds]
            traces = [f.result() for f in futures]
    result = aggregate(traces)
    result.traces = traces
    return result


def figure2_threshold(horizon: int) -> float:
    return math.sqrt(horizon * math.log(horizon))


@dataclass(frozen=True)
class Figure2Result:
    horizon: int
    mean_sum: float
    threshold: float
    passed: bool


def figure2_check(config: ExperimentConfig, workers: int | None = None) -> Figure2Result:
    """Mean over repetitions of ``sum_{t>=2} N_t^{-1/2}`` against ``sqrt(T ln T)``."""
    if config.feedback is not Feedback.ONE_SIDED:
        raise ValueError("figure2_check needs one-sided feedback")
    if not config.budget_control:
        raise ValueError("figure2_check runs the budget-controlled bidder")
    res = run_experiment(config, workers=workers)
    mean_sum = float(np.sort(res.fig2_sums).mean())
    thr = figure2_threshold(config.horizon)
    return Figure2Result(config.horizon, mean_sum, thr, mean_sum <= thr)


def figure2_sweep(config: ExperimentConfig, tmax: int, tstep: int = 10_000,
                  workers: int | None = None) -> list[Figure2Result]:
    """Figure-2 check over ``T = tstep, 2*tstep, ..., tmax`` at the config's spend rate."""
    rho = config.rho
    out = []
    for horizon in range(tstep, tmax + 1, tstep):
        cfg = config.replace(horizon=horizon, budget=rho * horizon)
        out.append(figure2_check(cfg, workers))
        log.info("T=%d mean_sum=%.2f threshold=%.2f", horizon, out[-1].mean_sum, out[-1].threshold)
    return out


# --- outputs ----------------------------------------------------------------

TRACE_COLUMNS = ["t", "value", "lambda", "bid", "won", "reward", "cost", "budget"]
ONE_SIDED_COLUMNS = ["m", "N", "w"]
AGGREGATE_COLUMNS = ["t", "mean_rpr", "std_rpr", "mean_budget", "mean_lambda"]
FIGURE2_COLUMNS = ["T", "mean_sum", "threshold", "pass"]
BENCHMARK_COLUMNS = ["lambda_star", "per_round_value", "expected_cost", "binding"]


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def _write_rows(path: Path, header: list[str], rows) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\r\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(x) for x in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def write_trace_csv(trace: Trace, path: Path, stride: int) -> Path:
    if trace.full_resolution:
        rows_idx = trace.log_rows(stride)
    else:
        rows_idx = np.arange(len(trace.t))
    header = TRACE_COLUMNS + (ONE_SIDED_COLUMNS if trace.one_sided else [])

    def rows():
        for i in rows_idx:
            base = [trace.t[i], trace.value[i], trace.lam[i], trace.bid[i], bool(trace.won[i]),
                    trace.reward[i], trace.cost[i], trace.budget_left[i]]
            if trace.one_sided:
                base += [trace.shaded[i], int(trace.n_min[i]), trace.width[i]]
            yield base

    return _write_rows(path, header, rows())


def write_aggregate_csv(result: AggregateResult, path: Path) -> Path:
    rows = zip(result.checkpoints, result.mean_rpr, result.std_rpr, result.mean_budget, result.mean_lambda)
    return _write_rows(path, AGGREGATE_COLUMNS, rows)


def write_figure2_csv(results: list[Figure2Result], path: Path) -> Path:
    return _write_rows(path, FIGURE2_COLUMNS, ((r.horizon, r.mean_sum, r.threshold, r.passed) for r in results))


def write_benchmark_csv(result: BenchmarkResult, path: Path) -> Path:
    return _write_rows(path, BENCHMARK_COLUMNS, [list(result.as_row().values())])


def emit_outputs(result, out_dir: str | Path, config: ExperimentConfig, *, svg: bool = False,
                 title: str = "") -> list[Path]:
    """Write CSV (and optionally SVG) files for a result; names embed config hash and seed."""
    from .svg import line_chart

    out_dir = Path(out_dir)
    tag = f"{config.digest()}_seed{config.seed}"
    paths = []
    if isinstance(result, Trace):
        name = f"trace_{config.digest()}_seed{result.seed}.csv"
        paths.append(write_trace_csv(result, out_dir / name, config.log_stride))
    elif isinstance(result, AggregateResult):
        paths.append(write_aggregate_csv(result, out_dir / f"aggregate_{tag}.csv"))
        if svg:
            series = {"reward per round": (result.checkpoints, result.mean_rpr, result.std_rpr)}
            paths.append(line_chart(series, out_dir / f"aggregate_{tag}.svg", title=title))
    elif isinstance(result, BenchmarkResult):
        paths.append(write_benchmark_csv(result, out_dir / f"benchmark_{tag}.csv"))
    elif isinstance(result, list) and result and isinstance(result[0], Figure2Result):
        paths.append(write_figure2_csv(result, out_dir / f"figure2_{tag}.csv"))
        if svg:
            ts = np.array([r.horizon for r in result], dtype=float)
            series = {
                "mean sum N^-1/2": (ts, np.array([r.mean_sum for r in result]), None),
                "sqrt(T ln T)": (ts, np.array([r.threshold for r in result]), None),
            }
            paths.append(line_chart(series, out_dir / f"figure2_{tag}.svg", title=title, xlabel="T"))
    else:
        raise TypeError(f"cannot emit {type(result).__name__}")
    return paths


def write_figure1_panel(control: AggregateResult, baseline: AggregateResult, out_dir: Path,
                        name: str, title: str = "") -> list[Path]:
    """Combined CSV and SVG for one feedback model: controlled vs. baseline."""
    from .svg import line_chart

    header = ["t", "control_mean_rpr", "control_std_rpr", "baseline_mean_rpr", "baseline_std_rpr"]
    rows = zip(control.checkpoints, control.mean_rpr, control.std_rpr, baseline.mean_rpr, baseline.std_rpr)
    csv_path = _write_rows(Path(out_dir) / f"{name}.csv", header, rows)
    series = {
        "budget control": (control.checkpoints, control.mean_rpr, control.std_rpr),
        "no budget control": (baseline.checkpoints, baseline.mean_rpr, baseline.std_rpr),
    }
    return [csv_path, line_chart(series, Path(out_dir) / f"{name}.svg", title=title)]

"""Command-line entry point: ``fpa-pacing {simulate,benchmark,figure1,figure2,selftest}``.

Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime failure,
4 selftest failure. Worker count for repetitions comes from ``--workers`` or
the ``FPA_WORKERS`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import ConfigError, config_from_dict

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME, EXIT_SELFTEST = 0, 1, 2, 3, 4

log = logging.getLogger("fpa_pacing")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _overrides(args) -> dict:
    out = {}
    for flag, key in (("horizon", "horizon"), ("budget", "budget"), ("seed", "seed"), ("reps", "repetitions"),
                      ("feedback", "feedback"), ("step_size", "step_size"), ("log_stride", "log_stride")):
        val = getattr(args, flag, None)
        if val is not None:
            out[key] = val
    if getattr(args, "no_budget_control", False):
        out["budget_control"] = False
    return out


def _load(args):
    """Config from file with flag overrides applied to the raw document."""
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"config: cannot read {args.config}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: malformed JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be an object")
    raw.update(_overrides(args))
    return config_from_dict(raw)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fpa-pacing", description="Budget-paced bidding in repeated first-price auctions.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, out=True):
        sp.add_argument("--config", required=True)
        if out:
            sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--horizon", type=int)
        sp.add_argument("--budget", type=float)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--reps", type=int)
        sp.add_argument("--feedback", choices=["full", "one_sided"])
        sp.add_argument("--step-size", type=float)
        sp.add_argument("--log-stride", type=int)
        sp.add_argument("--no-budget-control", action="store_true")
        sp.add_argument("--workers", type=int)

    sp = sub.add_parser("simulate", help="run repetitions, write aggregate and trace CSVs")
    common(sp)
    sp.add_argument("--svg", action="store_true")
    sp.add_argument("--check", action="store_true", help="verify invariants on every run")

    sp = sub.add_parser("benchmark", help="solve the fluid dual and print lambda*, value, cost, binding")
    common(sp, out=False)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("figure1", help="control vs. baseline under both feedback models")
    common(sp)

    sp = sub.add_parser("figure2", help="sum of N^-1/2 vs sqrt(T ln T) over a horizon sweep")
    common(sp)
    sp.add_argument("--tmax", type=int, default=100_000)
    sp.add_argument("--tstep", type=int, default=10_000)

    sp = sub.add_parser("selftest", help="small-scale oracle equivalence and invariant checks")
    sp.add_argument("--configs", type=int, default=12)
    return p


def _simulate(args) -> int:
    from .harness import emit_outputs, run_experiment

    cfg = _load(args)
    res = run_experiment(cfg, workers=args.workers, check_invariants=args.check)
    paths = emit_outputs(res, args.out, cfg, svg=args.svg, title=f"{cfg.feedback.value} feedback")
    for tr in res.traces:
        paths += emit_outputs(tr, args.out, cfg)
    print(f"mean final reward/round {res.final_mean_rpr:.6g}, mean tau {res.mean_tau:.1f}", file=sys.stderr)
    for p in paths:
        print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


def _benchmark(args) -> int:
    from .benchmark import solve_dual
    from .harness import BENCHMARK_COLUMNS, emit_outputs

    cfg = _load(args)
    res = solve_dual(cfg.value_dist, cfg.competing_dist, cfg.rho, cfg.value_bound)
    row = res.as_row()
    print(",".join(BENCHMARK_COLUMNS))
    print(",".join(str(int(row[c])) if c == "binding" else repr(float(row[c])) for c in BENCHMARK_COLUMNS))
    if args.out:
        emit_outputs(res, args.out, cfg)
    return EXIT_OK


def _figure1(args) -> int:
    from .config import Feedback
    from .harness import run_experiment, write_figure1_panel

    cfg = _load(args)
    for fb in (Feedback.FULL, Feedback.ONE_SIDED):
        runs = {}
        for control in (True, False):
            runs[control] = run_experiment(cfg.replace(feedback=fb, budget_control=control), workers=args.workers)
            print(f"{fb.value} control={control}: final rpr {runs[control].final_mean_rpr:.6g}, "
                  f"mean tau {runs[control].mean_tau:.1f}", file=sys.stderr)
        name = f"figure1_{fb.value}_{cfg.digest()}_seed{cfg.seed}"
        for p in write_figure1_panel(runs[True], runs[False], Path(args.out), name, title=f"{fb.value} feedback"):
            print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


def _figure2(args) -> int:
    from .config import Feedback
    from .harness import emit_outputs, figure2_sweep

    cfg = _load(args).replace(feedback=Feedback.ONE_SIDED, budget_control=True)
    results = figure2_sweep(cfg, args.tmax, args.tstep, workers=args.workers)
    for r in results:
        print(f"T={r.horizon} mean_sum={r.mean_sum:.2f} threshold={r.threshold:.2f} pass={r.passed}",
              file=sys.stderr)
    for p in emit_outputs(results, args.out, cfg, svg=True, title="sum of N^-1/2"):
        print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


def _selftest(args) -> int:
    from .selftest import run_selftest

    failures = run_selftest(args.configs, verbose=lambda s: print(s, file=sys.stderr))
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    if failures:
        return EXIT_SELFTEST
    print("selftest passed", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "simulate": _simulate,
    "benchmark": _benchmark,
    "figure1": _figure1,
    "figure2": _figure2,
    "selftest": _selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - top-level exit code mapping
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

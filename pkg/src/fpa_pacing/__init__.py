"""Budget-paced bidding in repeated first-price auctions under full and one-sided feedback."""

from .benchmark import BenchmarkResult, FluidBenchmark, discrete_best_bid, regret_estimate, solve_dual
from .config import ConfigError, DistributionSpec, ExperimentConfig, Family, Feedback, load_config, parse_config
from .full_bidder import FullBidder, run_full
from .harness import AggregateResult, figure2_check, run_experiment, simulate
from .one_sided import OneSidedBidder, run_one_sided
from .trace import Trace

__version__ = "0.1.0"

__all__ = [
    "AggregateResult", "BenchmarkResult", "ConfigError", "DistributionSpec", "ExperimentConfig", "Family",
    "Feedback", "FluidBenchmark", "FullBidder", "OneSidedBidder", "Trace", "discrete_best_bid",
    "figure2_check", "load_config", "parse_config", "regret_estimate", "run_experiment", "run_full",
    "run_one_sided", "simulate", "solve_dual",
]

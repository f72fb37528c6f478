"""Experiment configuration and seeded sampling of values and competing bids.

Configs are JSON documents with the keys listed in ``CONFIG_KEYS``. Random
streams come from numpy's PCG64 bit generator; a repetition with seed ``s``
draws private values and competing bids from two independent child streams
of ``SeedSequence(s)``, so the same seed gives the same (v, d) sequence to
every bidder variant.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from scipy.special import ndtr

MAX_REJECTIONS = 1_000_000

CONFIG_KEYS = (
    "horizon",
    "budget",
    "value_bound",
    "bid_grid",
    "value_grid",
    "step_size",
    "failure_prob",
    "value_dist",
    "competing_dist",
    "repetitions",
    "seed",
    "budget_control",
    "feedback",
    "log_stride",
)


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


class Family(str, Enum):
    NORMAL = "normal"
    LOGNORMAL = "lognormal"
    UNIFORM = "uniform"
    POINT_MASS = "pointmass"


class Feedback(str, Enum):
    FULL = "full"
    ONE_SIDED = "one_sided"


_FAMILY_ALIASES = {
    "normal": Family.NORMAL,
    "gaussian": Family.NORMAL,
    "lognormal": Family.LOGNORMAL,
    "log_normal": Family.LOGNORMAL,
    "log-normal": Family.LOGNORMAL,
    "uniform": Family.UNIFORM,
    "pointmass": Family.POINT_MASS,
    "point_mass": Family.POINT_MASS,
    "point-mass": Family.POINT_MASS,
}

_FEEDBACK_ALIASES = {
    "full": Feedback.FULL,
    "one_sided": Feedback.ONE_SIDED,
    "one-sided": Feedback.ONE_SIDED,
    "onesided": Feedback.ONE_SIDED,
}


@dataclass(frozen=True)
class DistributionSpec:
    """A distribution from one of four families.

    ``p1``/``p2`` are (mean, std) for normal, (log-mean, log-std) for
    lognormal, (lower, upper) for uniform and (atom, unused) for a point mass.
    """

    family: Family
    p1: float
    p2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not (math.isfinite(self.p1) and math.isfinite(self.p2)):
            raise ConfigError(f"{self.family.value}: parameters must be finite")
        if self.family in (Family.NORMAL, Family.LOGNORMAL) and self.p2 <= 0:
            raise ConfigError(f"{self.family.value}: standard deviation p2 must be > 0")
        if self.family is Family.UNIFORM and not self.p1 < self.p2:
            raise ConfigError("uniform: requires p1 < p2")

    @classmethod
    def from_dict(cls, d: dict, name: str = "dist") -> "DistributionSpec":
        if not isinstance(d, dict):
            raise ConfigError(f"{name}: expected an object with family, p1, p2")
        try:
            family = _FAMILY_ALIASES[str(d["family"]).lower()]
        except KeyError:
            raise ConfigError(f"{name}.family: unknown or missing family {d.get('family')!r}")
        try:
            p1 = float(d["p1"])
            p2 = float(d.get("p2", 0.0))
        except (KeyError, TypeError, ValueError):
            raise ConfigError(f"{name}: p1/p2 must be numbers")
        try:
            return cls(family, p1, p2)
        except ConfigError as exc:
            raise ConfigError(f"{name}: {exc}") from None

    def to_dict(self) -> dict:
        return {"family": self.family.value, "p1": self.p1, "p2": self.p2}

    def cdf(self, x):
        """CDF of the raw (unclamped) distribution, vectorized over ``x``."""
        x = np.asarray(x, dtype=float)
        if self.family is Family.NORMAL:
            return ndtr((x - self.p1) / self.p2)
        if self.family is Family.LOGNORMAL:
            with np.errstate(divide="ignore"):
                z = (np.log(np.where(x > 0, x, 1.0)) - self.p1) / self.p2
            return np.where(x > 0, ndtr(z), 0.0)
        if self.family is Family.UNIFORM:
            return np.clip((x - self.p1) / (self.p2 - self.p1), 0.0, 1.0)
        return np.where(x >= self.p1, 1.0, 0.0)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family is Family.NORMAL:
            z = (x - self.p1) / self.p2
            return np.exp(-0.5 * z * z) / (self.p2 * math.sqrt(2 * math.pi))
        if self.family is Family.LOGNORMAL:
            safe = np.where(x > 0, x, 1.0)
            z = (np.log(safe) - self.p1) / self.p2
            dens = np.exp(-0.5 * z * z) / (safe * self.p2 * math.sqrt(2 * math.pi))
            return np.where(x > 0, dens, 0.0)
        if self.family is Family.UNIFORM:
            inside = (x >= self.p1) & (x <= self.p2)
            return np.where(inside, 1.0 / (self.p2 - self.p1), 0.0)
        raise ValueError("point mass has no density")

    def competing_cdf(self, b):
        """CDF of the competing bid after negatives are clamped to 0."""
        b = np.asarray(b, dtype=float)
        if self.family is Family.POINT_MASS:
            return np.where(b >= max(self.p1, 0.0), 1.0, 0.0)
        return np.where(b >= 0, self.cdf(b), 0.0)


@dataclass(frozen=True)
class ExperimentConfig:
    horizon: int
    budget: float
    value_dist: DistributionSpec
    competing_dist: DistributionSpec
    value_bound: float = 1.0
    bid_grid: int = 100
    value_grid: int = 100
    step_size: float | None = None  # None -> 1/sqrt(horizon)
    failure_prob: float = 0.01
    repetitions: int = 20
    seed: int = 0
    budget_control: bool = True
    feedback: Feedback = Feedback.FULL
    log_stride: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "feedback", Feedback(self.feedback))
        if self.step_size is None and isinstance(self.horizon, int) and self.horizon > 0:
            object.__setattr__(self, "step_size", 1.0 / math.sqrt(self.horizon))
        self._validate()

    def _validate(self):
        def need(ok, fld, msg):
            if not ok:
                raise ConfigError(f"{fld}: {msg}")

        for fld in ("horizon", "bid_grid", "value_grid", "repetitions", "log_stride"):
            v = getattr(self, fld)
            need(isinstance(v, int) and not isinstance(v, bool) and v >= 1, fld, "must be a positive integer")
        need(isinstance(self.seed, int) and 0 <= self.seed < 2**64, "seed", "must be a 64-bit non-negative integer")
        need(math.isfinite(self.value_bound) and self.value_bound > 0, "value_bound", "must be > 0")
        need(math.isfinite(self.budget) and self.budget > 0, "budget", "must be > 0 (rho must lie in (0, value_bound])")
        need(self.rho <= self.value_bound, "budget", f"rho = budget/horizon = {self.rho:g} exceeds value_bound")
        need(math.isfinite(self.step_size) and self.step_size > 0, "step_size", "must be > 0")
        need(0 < self.failure_prob < 1, "failure_prob", "must lie in (0, 1)")
        if self.value_dist.family is Family.POINT_MASS:
            need(0 <= self.value_dist.p1 <= self.value_bound, "value_dist", "point mass must lie in [0, value_bound]")

    @property
    def rho(self) -> float:
        return self.budget / self.horizon

    def to_dict(self) -> dict:
        d = asdict(self)
        d["value_dist"] = self.value_dist.to_dict()
        d["competing_dist"] = self.competing_dist.to_dict()
        d["feedback"] = self.feedback.value
        return d

    def digest(self, n: int = 10) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:n]

    def replace(self, **changes) -> "ExperimentConfig":
        # a new horizon re-derives the default step size unless one is given
        if "horizon" in changes and "step_size" not in changes:
            changes["step_size"] = None
        return replace(self, **changes)


def config_from_dict(raw: dict[str, Any]) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be an object")
    unknown = set(raw) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown key")
    for key in ("horizon", "budget", "value_dist", "competing_dist"):
        if key not in raw:
            raise ConfigError(f"{key}: required")

    kw: dict[str, Any] = {}

    def as_int(key):
        v = raw[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
            raise ConfigError(f"{key}: must be an integer")
        return int(v)

    def as_float(key):
        v = raw[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key}: must be a number")
        return float(v)

    for key in ("horizon", "bid_grid", "value_grid", "repetitions", "seed", "log_stride"):
        if key in raw:
            kw[key] = as_int(key)
    for key in ("budget", "value_bound", "failure_prob"):
        if key in raw:
            kw[key] = as_float(key)
    if raw.get("step_size") is not None:
        kw["step_size"] = as_float("step_size")
    if "budget_control" in raw:
        if not isinstance(raw["budget_control"], bool):
            raise ConfigError("budget_control: must be true or false")
        kw["budget_control"] = raw["budget_control"]
    if "feedback" in raw:
        try:
            kw["feedback"] = _FEEDBACK_ALIASES[str(raw["feedback"]).lower()]
        except KeyError:
            raise ConfigError(f"feedback: expected 'full' or 'one_sided', got {raw['feedback']!r}")
    kw["value_dist"] = DistributionSpec.from_dict(raw["value_dist"], "value_dist")
    kw["competing_dist"] = DistributionSpec.from_dict(raw["competing_dist"], "competing_dist")
    return ExperimentConfig(**kw)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON config document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: malformed JSON ({exc})") from None
    return config_from_dict(raw)


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


# --- sampling ---------------------------------------------------------------

def make_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """(value stream, competing-bid stream) for one repetition."""
    sv, sd = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(sv)), np.random.Generator(np.random.PCG64(sd))


def _raw_draws(spec: DistributionSpec, rng: np.random.Generator, size=None):
    if spec.family is Family.NORMAL:
        return rng.normal(spec.p1, spec.p2, size)
    if spec.family is Family.LOGNORMAL:
        return rng.lognormal(spec.p1, spec.p2, size)
    if spec.family is Family.UNIFORM:
        return rng.uniform(spec.p1, spec.p2, size)
    return spec.p1 if size is None else np.full(size, spec.p1)


def sample_value(spec: DistributionSpec, vbar: float, rng: np.random.Generator) -> float:
    """One private value in [0, vbar]; out-of-range draws are redrawn."""
    for _ in range(MAX_REJECTIONS):
        v = float(_raw_draws(spec, rng))
        if 0.0 <= v <= vbar:
            return v
    raise ConfigError(f"value sampler rejected {MAX_REJECTIONS} draws in a row; {spec} has no mass in [0, {vbar}]")


def sample_values(spec: DistributionSpec, vbar: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` private values by batched rejection sampling into [0, vbar]."""
    out = np.empty(n)
    filled = 0
    misses = 0
    batch = max(n, 64)
    while filled < n:
        raw = np.asarray(_raw_draws(spec, rng, batch), dtype=float)
        ok = raw[(raw >= 0.0) & (raw <= vbar)]
        take = min(len(ok), n - filled)
        out[filled:filled + take] = ok[:take]
        filled += take
        misses = misses + batch if take == 0 else 0
        if misses >= MAX_REJECTIONS:
            raise ConfigError(f"value sampler rejected {misses} draws in a row; {spec} has no mass in [0, {vbar}]")
        if len(ok):
            batch = max(64, int(1.2 * (n - filled) * batch / len(ok)) + 1)
    return out


def sample_competing_bid(spec: DistributionSpec, rng: np.random.Generator) -> float:
    return max(float(_raw_draws(spec, rng)), 0.0)


def sample_competing_bids(spec: DistributionSpec, rng: np.random.Generator, n: int) -> np.ndarray:
    return np.maximum(np.asarray(_raw_draws(spec, rng, n), dtype=float), 0.0)

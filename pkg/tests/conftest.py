import pytest

from fpa_pacing.config import DistributionSpec, ExperimentConfig, Family, Feedback

COMPETING = DistributionSpec(Family.NORMAL, 0.4, 0.1)
VALUE_DISTS = {
    "normal": DistributionSpec(Family.NORMAL, 0.6, 0.1),
    "lognormal": DistributionSpec(Family.LOGNORMAL, -0.4, 0.1),
    "uniform": DistributionSpec(Family.UNIFORM, 0.25, 1.0),
}


def small_config(**kw):
    base = dict(horizon=2000, budget=20.0, value_dist=VALUE_DISTS["normal"], competing_dist=COMPETING,
                bid_grid=20, value_grid=20, repetitions=1, log_stride=100)
    base.update(kw)
    return ExperimentConfig(**base)


@pytest.fixture
def full_config():
    return small_config()


@pytest.fixture
def one_sided_config():
    return small_config(feedback=Feedback.ONE_SIDED)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(n: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[n] = (bool(passed), detail)
    print(f"criterion {n}: {'PASS' if passed else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {detail}")

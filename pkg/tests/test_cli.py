import json

import pytest

from fpa_pacing.cli import main

U01 = {"family": "uniform", "p1": 0.0, "p2": 1.0}


def write(tmp_path, **kw):
    raw = {"horizon": 2000, "budget": 20.0, "value_dist": {"family": "normal", "p1": 0.6, "p2": 0.1},
           "competing_dist": {"family": "normal", "p1": 0.4, "p2": 0.1}, "bid_grid": 20, "value_grid": 20,
           "repetitions": 2, "log_stride": 500}
    raw.update(kw)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(raw))
    return str(path)


def test_benchmark_prints_zero_multiplier(tmp_path, capsys):
    cfg = write(tmp_path, horizon=1200, budget=100.0, value_dist=U01, competing_dist=U01)
    assert main(["benchmark", "--config", cfg]) == 0
    header, row = capsys.readouterr().out.strip().splitlines()
    assert header == "lambda_star,per_round_value,expected_cost,binding"
    assert float(row.split(",")[0]) == 0.0


def test_simulate_is_reproducible(tmp_path):
    cfg = write(tmp_path)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", cfg, "--seed", "7", "--out", str(a)]) == 0
    assert main(["simulate", "--config", cfg, "--seed", "7", "--out", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    assert any(n.startswith("aggregate_") for n in names)
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()


def test_override_equals_file_edit(tmp_path):
    cfg = write(tmp_path)
    assert main(["simulate", "--config", cfg, "--horizon", "1000", "--no-budget-control",
                 "--feedback", "one_sided", "--out", str(tmp_path / "flag")]) == 0
    edited = tmp_path / "edited"
    edited.mkdir()
    raw = json.loads(open(cfg).read())
    raw.update(horizon=1000, budget_control=False, feedback="one_sided")
    (edited / "cfg.json").write_text(json.dumps(raw))
    assert main(["simulate", "--config", str(edited / "cfg.json"), "--out", str(tmp_path / "file")]) == 0
    flag = {p.name: p.read_bytes() for p in (tmp_path / "flag").iterdir()}
    file = {p.name: p.read_bytes() for p in (tmp_path / "file").iterdir()}
    assert flag == file


def test_figure2(tmp_path):
    cfg = write(tmp_path, feedback="one_sided", repetitions=1)
    assert main(["figure2", "--config", cfg, "--tmax", "2000", "--tstep", "1000", "--out", str(tmp_path)]) == 0
    (path,) = tmp_path.glob("figure2_*.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "T,mean_sum,threshold,pass"
    assert [l.split(",")[0] for l in lines[1:]] == ["1000", "2000"]


def test_figure1(tmp_path):
    cfg = write(tmp_path, repetitions=1, horizon=1000, budget=10.0)
    assert main(["figure1", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert len(list(tmp_path.glob("figure1_*.csv"))) == 2
    assert len(list(tmp_path.glob("figure1_*.svg"))) == 2


@pytest.mark.parametrize("argv", [[], ["simulate"], ["simulate", "--config", "x", "--bogus"], ["frobnicate"]])
def test_usage_errors(argv):
    assert main(argv) == 1


def test_config_errors(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["benchmark", "--config", str(bad)]) == 2
    assert main(["benchmark", "--config", write(tmp_path), "--budget", "5000"]) == 2


def test_runtime_error(tmp_path, monkeypatch):
    import fpa_pacing.harness as harness

    monkeypatch.setattr(harness, "simulate", lambda c, s: 1 / 0)
    assert main(["simulate", "--config", write(tmp_path), "--out", str(tmp_path)]) == 3


def test_selftest_passes():
    assert main(["selftest", "--configs", "3"]) == 0


def test_selftest_failure_exit_code(monkeypatch):
    import fpa_pacing.selftest as selftest

    monkeypatch.setattr(selftest, "run_selftest", lambda *a, **k: ["broken"])
    assert main(["selftest"]) == 4

"""Command-line surface: exit codes, outputs, manifest reproducibility."""

import json

import pytest
from click.testing import CliRunner

from merw.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write_config(path, **overrides):
    spec = {
        "walk": {"d": 1, "p": 0.75, "r": 0.0},
        "variant": "stops",
        "n": 100,
        "replicas": 1,
        "master_seed": 7,
        "checkpoints": "dense",
    }
    spec.update(overrides)
    path.write_text(json.dumps(spec))
    return path


class TestSimulate:
    def test_minimal_config_writes_trace(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        out = tmp_path / "out"
        res = runner.invoke(main, ["simulate", str(cfg), "--out", str(out)])
        assert res.exit_code == 0, res.output
        lines = (out / "trace.csv").read_text().splitlines()
        assert len(lines) == 101  # header + one row per step
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["master_seed"] == 7
        assert "trace.csv" in manifest["outputs"]

    def test_invalid_config_exits_2(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", walk={"d": 3, "p": 0.1, "r": 0.95})
        res = runner.invoke(main, ["simulate", str(cfg), "--out", str(tmp_path / "o")])
        assert res.exit_code == 2
        assert "constraint" in res.output or "exceeds 1" in res.output

    def test_rerun_reproduces_digests(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", replicas=8)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert runner.invoke(main, ["simulate", str(cfg), "--out", str(out1)]).exit_code == 0
        assert runner.invoke(main, ["simulate", str(cfg), "--out", str(out2)]).exit_code == 0
        m1 = json.loads((out1 / "manifest.json").read_text())
        m2 = json.loads((out2 / "manifest.json").read_text())
        assert m1["outputs"] == m2["outputs"]

    def test_set_overrides(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json")
        out = tmp_path / "out"
        res = runner.invoke(
            main, ["simulate", str(cfg), "--set", "walk.r=0.2", "--set", "n=50", "--out", str(out)]
        )
        assert res.exit_code == 0, res.output
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["walk"]["r"] == 0.2
        assert manifest["config"]["n"] == 50

    def test_ensemble_summary_csv(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", replicas=16, checkpoints=[1, 10, 100])
        out = tmp_path / "out"
        res = runner.invoke(main, ["simulate", str(cfg), "--out", str(out)])
        assert res.exit_code == 0, res.output
        lines = (out / "summary.csv").read_text().splitlines()
        assert len(lines) == 4
        assert lines[0].startswith("checkpoint,moves_mean,moves_var")
        doc = json.loads((out / "summary.json").read_text())
        assert doc["checkpoints"] == [1, 10, 100]
        assert len(doc["mean"]["moves"]) == 3
        assert doc["config"]["walk"]["d"] == 1

    def test_manifest_reruns_itself(self, runner, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", replicas=8)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert runner.invoke(main, ["simulate", str(cfg), "--out", str(out1)]).exit_code == 0
        res = runner.invoke(
            main, ["simulate", str(out1 / "manifest.json"), "--out", str(out2)]
        )
        assert res.exit_code == 0, res.output
        m1 = json.loads((out1 / "manifest.json").read_text())
        m2 = json.loads((out2 / "manifest.json").read_text())
        assert m1["outputs"] == m2["outputs"]

    def test_thread_cap_env(self, runner, tmp_path, monkeypatch):
        from merw.ensemble import resolve_parallelism

        monkeypatch.setenv("MERW_THREADS", "1")
        assert resolve_parallelism(16) == 1
        monkeypatch.delenv("MERW_THREADS")
        assert resolve_parallelism(3) == 3


class TestExpect:
    def test_moves(self, runner):
        res = runner.invoke(main, ["expect", "--moves", "-r", "0.5", "-n", "3"])
        assert res.exit_code == 0
        assert "1.875" in res.output
        assert "expected-moves-gamma-ratio" in res.output

    def test_ulimit_critical(self, runner):
        res = runner.invoke(main, ["expect", "--ulimit", "-r", "0.5"])
        assert res.exit_code == 0
        assert "log" in res.output
        assert "0.785398163397" in res.output

    def test_gamma(self, runner):
        res = runner.invoke(main, ["expect", "--gamma", "-d", "2", "-p", "1"])
        assert res.exit_code == 0
        assert " 1 " in res.output

    def test_json_mode(self, runner):
        res = runner.invoke(main, ["expect", "--moment", "-r", "0.3", "-m", "2", "--json"])
        assert res.exit_code == 0
        doc = json.loads(res.output)
        assert doc["limit_moment"]["value"] == pytest.approx(1.3293265535718133)
        assert doc["limit_moment"]["citation"]

    def test_domain_error_exits_4(self, runner):
        res = runner.invoke(main, ["expect", "--hyp3f2", "-r", "0.6"])
        assert res.exit_code == 4

    def test_missing_flags_exit_2(self, runner):
        assert runner.invoke(main, ["expect", "--moves", "-r", "0.5"]).exit_code == 2
        assert runner.invoke(main, ["expect"]).exit_code == 2

    def test_variation_with_sizes(self, runner):
        res = runner.invoke(
            main,
            ["expect", "--variation", "-n", "4", "--sizes", "zero-inflated-point:b=0.5,value=1"],
        )
        assert res.exit_code == 0
        assert " 1 " in res.output


class TestVerify:
    def test_bogus_suite_exits_2(self, runner):
        assert runner.invoke(main, ["verify", "bogus"]).exit_code == 2

    def test_quick_suite_writes_reports(self, runner, tmp_path):
        res = runner.invoke(
            main,
            ["verify", "variation", "--scale", "0.1", "--out", str(tmp_path)],
        )
        assert res.exit_code == 0, res.output
        doc = json.loads((tmp_path / "variation-reports.json").read_text())
        assert doc["reports"][0]["name"] == "variation-identity"
        assert doc["reports"][0]["verdict"] == "pass"

    def test_hard_failure_exits_1(self, runner, tmp_path, monkeypatch):
        from merw import suites
        from merw.stattests import FAIL, TestReport

        def failing_suite(seed=None, parallelism=None, scale=1.0):
            return [TestReport(
                name="stub", citation="stub", null_value=0.0, observed=1.0,
                error_scale=0.0, rule="stub", verdict=FAIL,
            )]

        monkeypatch.setitem(suites.SUITES, "variation", failing_suite)
        res = runner.invoke(main, ["verify", "variation", "--out", str(tmp_path)])
        assert res.exit_code == 1

    def test_advisory_failure_keeps_exit_0(self, runner, tmp_path, monkeypatch):
        from merw import suites
        from merw.stattests import FAIL, TestReport

        def advisory_suite(seed=None, parallelism=None, scale=1.0):
            return [TestReport(
                name="stub", citation="stub", null_value=0.0, observed=1.0,
                error_scale=0.0, rule="stub", verdict=FAIL, advisory=True,
            )]

        monkeypatch.setitem(suites.SUITES, "lil-smoke", advisory_suite)
        res = runner.invoke(main, ["verify", "lil-smoke", "--out", str(tmp_path)])
        assert res.exit_code == 0, res.output

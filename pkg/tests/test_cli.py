import json
import os
import stat

import pytest

from squidsim.cli import main

CUSTOM_BELLISH = [
    "--set", "scenario=custom",
    "--set", "c0=0.7071067811865476,0,0,0.7071067811865476",
    "--set", "t_end=20",
]


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestSimulate:
    def test_custom_run_artifacts(self, tmp_path):
        out = tmp_path / "run"
        code = main(["simulate", *CUSTOM_BELLISH, "--out", str(out)])
        assert code == 0
        csv = (out / "timeseries.csv").read_text()
        lines = csv.splitlines()
        assert lines[0] == (
            "t,P1,P2,P3,P4,EF1,EF2,EF3,EF_squid,EF_ab,"
            "Cl1_squid,Cl1_ab,norm_drift"
        )
        assert len(lines) == 42  # t=0, 40 sampled intervals, t_end
        report = json.loads((out / "report.json").read_text())
        assert report["artifact_version"]
        assert report["config"]["scenario"] == "custom"
        assert report["report"]["complete"] is True

    def test_rows_sum_to_one(self, tmp_path):
        out = tmp_path / "run"
        main(["simulate", *CUSTOM_BELLISH, "--out", str(out)])
        for line in (out / "timeseries.csv").read_text().splitlines()[1:]:
            cells = [float(x) for x in line.split(",")]
            assert abs(sum(cells[1:5]) - 1.0) <= 1e-8

    def test_determinism(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", *CUSTOM_BELLISH, "--out", str(a)]) == 0
        assert main(["simulate", *CUSTOM_BELLISH, "--out", str(b)]) == 0
        assert read(a / "timeseries.csv") == read(b / "timeseries.csv")
        assert read(a / "report.json") == read(b / "report.json")

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        # Omega_a = 0 decouples the initial amplitude, so it stays put
        cfg.write_text(
            "scenario = custom\nc0 = 1,0,0,0\nOmega_a = 0\nt_end = 5\n"
        )
        out = tmp_path / "run"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["report"]["final_populations"][0] == pytest.approx(
            1.0, abs=1e-9
        )

    def test_csv_only_format(self, tmp_path):
        out = tmp_path / "run"
        code = main(
            ["simulate", *CUSTOM_BELLISH, "--out", str(out), "--format", "csv"]
        )
        assert code == 0
        assert (out / "timeseries.csv").exists()
        assert not (out / "report.json").exists()

    def test_unknown_key_exit_1(self, tmp_path, capsys):
        code = main(["simulate", "--set", "bogus=1", "--out", str(tmp_path / "x")])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["type"] == "ConfigError"
        assert err["error"]["exit_code"] == 1

    def test_scenario_incomplete_exit_2(self, tmp_path, capsys):
        out = tmp_path / "run"
        code = main(
            [
                "simulate",
                "--set", "Omega_a=0",
                "--set", "Omega_b=0",
                "--set", "t_end=50",
                "--out", str(out),
            ]
        )
        assert code == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["type"] == "ScenarioIncompleteError"
        report = json.loads((out / "report.json").read_text())
        assert report["report"]["complete"] is False
        assert (out / "timeseries.csv").exists()  # partial output flagged

    def test_unwritable_out_dir(self, tmp_path, capsys):
        locked = tmp_path / "locked"
        locked.mkdir()
        os.chmod(locked, stat.S_IRUSR | stat.S_IXUSR)
        if os.access(locked / "probe", os.W_OK) or os.geteuid() == 0:
            pytest.skip("cannot revoke write permission (running as root)")
        code = main(
            ["simulate", *CUSTOM_BELLISH, "--out", str(locked / "run")]
        )
        assert code == 1
        assert not (locked / "run" / "timeseries.csv").exists()


class TestLadderCompare:
    def test_report(self, tmp_path):
        out = tmp_path / "ladder"
        code = main(["ladder-compare", "--out", str(out)])
        assert code == 0
        report = json.loads((out / "report.json").read_text())["report"]
        assert report["complete"] is True
        assert report["g_over_delta"] == pytest.approx(1e-2)
        assert report["max_intermediate_population"] <= 1e-3


class TestSweep:
    def test_grid(self, tmp_path):
        out = tmp_path / "grid"
        code = main(
            [
                "sweep",
                *CUSTOM_BELLISH,
                "--sweep", "t_end=10,20",
                "--out", str(out),
                "--jobs", "2",
            ]
        )
        assert code == 0
        merged = json.loads((out / "sweep.json").read_text())
        assert set(merged["jobs"]) == {"t_end-10", "t_end-20"}
        for label in merged["jobs"]:
            assert merged["jobs"][label]["exit_code"] == 0
            assert (out / label / "timeseries.csv").exists()

    def test_requires_axis(self, capsys):
        assert main(["sweep"]) == 1
        assert "sweep" in capsys.readouterr().err


class TestValidate:
    def test_passes(self, capsys):
        code = main(["validate", "--seed", "3", "--draws", "3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "FAIL" not in out
        assert out.count("pass") >= 5

import json
import subprocess
import sys

import pytest

from bb84eve.cli import UsageError, main, parse_args
from bb84eve.tables import SweepTable


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParse:
    def test_assess_valid(self):
        spec = parse_args(["assess", "--p", "0.05", "--omega", "0.3,0.5", "--q", "0.25,0.25,0.5"])
        assert spec.command == "assess"
        assert spec.omega == (0.3, 0.5) and spec.q == (0.25, 0.25, 0.5)

    def test_p_out_of_range(self):
        with pytest.raises(UsageError, match=r"out of \[0,1\]"):
            parse_args(["assess", "--p", "1.5", "--omega", "0.3", "--q", "0.5,0.5"])

    def test_sweep_with_uniform_rule(self):
        spec = parse_args(
            ["qber-curve", "--n-eves", "2", "--p-min", "0", "--p-max", "0.24",
             "--p-steps", "100", "--q-rule", "uniform"]
        )
        assert spec.n_eves == 2 and spec.q is None and spec.q_rule == "uniform"

    @pytest.mark.parametrize(
        "argv",
        [
            ["assess", "--p", "0.1", "--omega", "0.3", "--q", "0.2,0.3,0.5"],
            ["assess", "--p", "0.1", "--omega", "0.3", "--q", "0.4,0.4"],
            ["assess", "--p", "0.1", "--omega", "0.3", "--q", "0.5,0.5", "--q-rule", "uniform"],
            ["assess", "--p", "0.1", "--omega", "0.3"],
            ["assess", "--omega", "0.3", "--q", "0.5,0.5"],
            ["assess", "--p", "0.1", "--omega", "0.3", "--q", "0.5,0.5", "--bogus", "1"],
            ["qber-curve", "--q-rule", "triangular"],
            ["phase2d", "--n-eves", "2", "--q", "0.5,0.5"],
            ["phase3d", "--p", "0.05", "--q", "0.5,0.5"],
            ["qber-curve", "--p-min", "0.2", "--p-max", "0.1"],
            ["simulate", "--p", "0.1", "--omega", "0.5", "--q", "0.5,0.5", "--photons", "0"],
            ["verify", "--n-eves", "13"],
            ["nonsense"],
            [],
        ],
    )
    def test_usage_errors(self, argv):
        with pytest.raises(UsageError):
            parse_args(argv)

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "fig3.json"
        cfg.write_text(json.dumps({"n-eves": 1, "q": [0.5, 0.5], "p-steps": 7}))
        spec = parse_args(["phase2d", "--config", str(cfg), "--p-steps", "9"])
        assert spec.q == (0.5, 0.5) and spec.p_steps == 9 and spec.n_eves == 1

    def test_config_unknown_key(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"photons": 5}))
        with pytest.raises(UsageError):
            parse_args(["phase2d", "--config", str(cfg)])


class TestRun:
    def test_usage_exit_code(self, capsys):
        code, out, err = run_cli(capsys, "assess", "--p", "1.5", "--omega", "0.3", "--q", "0.5,0.5")
        assert code == 2 and out == ""
        assert len(err.strip().splitlines()) == 1

    def test_critical_p(self, capsys):
        code, out, _ = run_cli(capsys, "critical-p")
        assert code == 0
        assert out.startswith("p_critical\n0.165041")
        assert out == "p_critical\n0.165041796645\n"

    def test_assess_schema(self, capsys):
        code, out, _ = run_cli(capsys, "assess", "--p", "0", "--omega", "0.5", "--q", "0.5,0.5")
        header, row = out.splitlines()
        assert header == "i_ab,i_ae_max,h_delta,i_lost,p_err,secured"
        assert row.endswith(",true") and code == 0

    def test_assess_uniform(self, capsys):
        a = run_cli(capsys, "assess", "--p", "0.1", "--omega", "0.3,0.2", "--q-rule", "uniform")[1]
        b = run_cli(capsys, "assess", "--p", "0.1", "--omega", "0.3,0.2", "--q", f"{1/3},{1/3},{1/3}")[1]
        assert a == b

    @pytest.mark.parametrize(
        "argv, header",
        [
            (["qber-curve", "--p-steps", "5"], "p,omega_star,qber,i_ab,i_ae_max,h_delta,status"),
            (["phase2d", "--p-steps", "5", "--n-eves", "1", "--q", "0.5,0.5"], "p,omega_star,status"),
            (["phase3d", "--p", "0.05", "--q", "0.25,0.25,0.25,0.25", "--omega-steps", "4"],
             "omega1,omega2,omega3_star,status"),
            (["lost-info", "--omega", "0.8", "--p-steps", "4"], "p,q1,i_lost"),
            (["simulate", "--photons", "20000", "--seed", "1", "--p", "0.1", "--omega", "0.6",
              "--q", "0.5,0.5"], "party,agreement_hat,stderr,z_score"),
            (["verify", "--n-eves", "2", "--trials", "20", "--seed", "3"],
             "check,trials,max_abs_error,passed"),
        ],
    )
    def test_schemas_and_round_trip(self, capsys, argv, header):
        code, out, _ = run_cli(capsys, *argv)
        assert code == 0
        assert out.splitlines()[0] == header
        assert "\r" not in out and out.endswith("\n")
        table = SweepTable.from_csv(out)
        assert table.to_csv() == out

    def test_qber_curve_first_row(self, capsys):
        out = run_cli(capsys, "qber-curve", "--p-min", "0", "--p-max", "0", "--p-steps", "1")[1]
        row = out.splitlines()[1].split(",")
        assert float(row[2]) == 0.25 and row[-1] == "OK"

    def test_sentinel_row(self, capsys):
        out = run_cli(capsys, "phase2d", "--p-min", "0.2", "--p-max", "0.2", "--p-steps", "1")[1]
        assert out.splitlines()[1] == "0.2,,ALL_UNSECURED"

    def test_numeric_failure_exit_code(self, capsys):
        codes = {
            run_cli(capsys, "simulate", "--photons", "1", "--seed", str(s), "--p", "0",
                    "--omega", "0.5", "--q", "0.5,0.5")[0]
            for s in range(30)
        }
        # a lone photon is either discarded or gives a zero-stderr estimate
        assert codes == {1}

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "out.csv"
        code, out, _ = run_cli(capsys, "critical-p", "-o", str(path))
        assert code == 0 and out == ""
        assert path.read_bytes() == b"p_critical\n0.165041796645\n"

    def test_simulate_deterministic(self, capsys):
        argv = ["simulate", "--photons", "200000", "--seed", "42", "--p", "0.1",
                "--omega", "0.6", "--q", "0.5,0.5"]
        first = run_cli(capsys, *argv)[1]
        assert run_cli(capsys, *argv)[1] == first
        assert run_cli(capsys, *argv, "--threads", "3")[1] == first

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "bb84eve", "critical-p"], capture_output=True, text=True
        )
        assert proc.returncode == 0 and proc.stdout.startswith("p_critical\n")


def test_shipped_configs(capsys):
    from pathlib import Path

    configs = sorted((Path(__file__).parent.parent / "configs").glob("*.json"))
    assert len(configs) >= 6
    for cfg in configs:
        data = json.loads(cfg.read_text())
        command = data.pop("command")
        # shrink grids so the test stays fast
        argv = [command, "--config", str(cfg)]
        if "p-steps" in data:
            argv += ["--p-steps", "5"]
        if "omega-steps" in data:
            argv += ["--omega-steps", "3"]
        code, out, _ = run_cli(capsys, *argv)
        assert code == 0, cfg.name

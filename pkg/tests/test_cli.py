"""Config loading and the command-line front end."""

import math
import subprocess
import sys

import pytest

from uplink_ee import cli, load_config
from uplink_ee.config import ConfigError, parse_grid


class TestConfig:
    def test_defaults_load_without_file(self):
        cfg = load_config()
        assert cfg.propagation.alpha == 3.76
        assert cfg.propagation.omega == pytest.approx(1e13)
        assert cfg.propagation.block_len == 400

    def test_watt_to_joule_conversion(self):
        cfg = load_config()
        # 10 W at 5e-8 s/symbol
        assert cfg.hardware.c0 == pytest.approx(5e-7)
        assert cfg.hardware.d1 == pytest.approx(1.56e-10)

    def test_file_overrides_and_default_tracking(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[scenario]\ngamma = 7\nseed = 1\n")
        cfg = load_config(str(ini))
        assert cfg.scenario["gamma"] == "7"
        assert "scenario.gamma" not in cfg.defaulted
        assert "propagation.alpha" in cfg.defaulted

    def test_unknown_key_rejected(self, tmp_path):
        ini = tmp_path / "bad.ini"
        ini.write_text("[scenario]\ngamna = 3\n")
        with pytest.raises(ConfigError):
            load_config(str(ini))

    def test_malformed_value_rejected(self, tmp_path):
        ini = tmp_path / "bad.ini"
        ini.write_text("[propagation]\nalpha = fast\n")
        with pytest.raises(ConfigError):
            load_config(str(ini))

    def test_grid_specs(self):
        assert parse_grid("1:5:5:lin") == [1, 2, 3, 4, 5]
        log = parse_grid("1:100:3:log")
        assert log == pytest.approx([1, 10, 100])
        assert parse_grid("2.5,7") == [2.5, 7.0]
        with pytest.raises(ConfigError):
            parse_grid("1:2")


def run_cli(*argv):
    return cli.main(list(argv))


class TestCommands:
    def test_evaluate_defaults(self, tmp_path, capsys):
        out = tmp_path / "eval.csv"
        assert run_cli("evaluate", "--gamma", "3", "--out", str(out)) == 0
        body = out.read_text()
        assert body.startswith("# command: evaluate")
        last = body.strip().splitlines()[-1].split(",")
        assert last[-1] == "1"                       # feasible
        assert float(last[-2]) == pytest.approx(10.3735e6, rel=1e-3)

    def test_evaluate_csv_roundtrip(self, tmp_path):
        from uplink_ee import model
        out = tmp_path / "eval.csv"
        ini = tmp_path / "run.ini"
        ini.write_text("[scenario]\nlambda = 10\nrho = 1.61e-19\n")
        run_cli("evaluate", "--config", str(ini), "--gamma", "3", "--out", str(out))
        rows = [r for r in out.read_text().splitlines() if not r.startswith("#")]
        vals = dict(zip(rows[0].split(","), rows[1].split(",")))
        cfg = load_config(str(ini))
        pt = model.OperatingPoint(
            lam=float(vals["lambda"]), m=float(vals["m"]), k=float(vals["k"]),
            beta=float(vals["beta"]), rho=float(vals["rho"]), gamma=3.0)
        rep = model.energy_efficiency(pt, cfg.propagation, cfg.hardware)
        assert rep.ee == pytest.approx(float(vals["ee"]), rel=2e-6)

    def test_optimize(self, tmp_path):
        out = tmp_path / "opt.csv"
        assert run_cli("optimize", "--gamma", "3", "--out", str(out)) == 0
        rows = [r.split(",") for r in out.read_text().splitlines()
                if not r.startswith("#")]
        integer = dict(zip(rows[0], rows[2]))
        assert (integer["m"], integer["k"]) == ("89", "10")

    def test_sweep_requires_axis(self):
        with pytest.raises(SystemExit):
            run_cli("sweep", "--gamma", "3")

    def test_sweep_lambda_monotone(self, tmp_path):
        out = tmp_path / "lam.csv"
        ini = tmp_path / "run.ini"
        ini.write_text("[scenario]\nm = 89\nk = 10\nlambda_grid = 1:100:6:log\n")
        assert run_cli("sweep", "--axis", "lambda", "--config", str(ini),
                       "--gamma", "3", "--out", str(out)) == 0
        rows = [r.split(",") for r in out.read_text().splitlines()
                if not r.startswith("#")]
        header = rows[0]
        ee_col = header.index("ee")
        ees = [float(r[ee_col]) for r in rows[1:]]
        assert len(ees) == 6
        for r in rows[1:]:
            row = dict(zip(header, r))
            assert float(row["ee"]) == pytest.approx(
                float(row["ase"]) / float(row["aec"]), rel=1e-5)
        assert all(b >= a * (1 - 1e-9) for a, b in zip(ees, ees[1:]))

    def test_bad_config_exits_one(self, tmp_path, capsys):
        ini = tmp_path / "bad.ini"
        ini.write_text("[scenario]\nwat = 1\n")
        assert run_cli("evaluate", "--config", str(ini)) == 1
        assert "config error" in capsys.readouterr().err

    def test_infeasible_point_exits_two(self, tmp_path, capsys):
        ini = tmp_path / "run.ini"
        ini.write_text("[scenario]\nm = 89\nk = 10\nbeta = 2\n")
        assert run_cli("evaluate", "--config", str(ini), "--gamma", "3") == 2

    def test_simulate_small_run(self, tmp_path, capsys):
        out = tmp_path / "sim.csv"
        ini = tmp_path / "run.ini"
        ini.write_text("[scenario]\nrealization_count = 5000\n")
        code = run_cli("simulate", "--config", str(ini), "--gamma", "3",
                       "--out", str(out), "--seed", "7")
        err = capsys.readouterr().err
        assert code == 0
        assert "serving-distance" in err and "empirical-se" in err
        assert "# seed: 7" in out.read_text()

    def test_console_script_exists(self):
        proc = subprocess.run([sys.executable, "-m", "uplink_ee.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        for name in ("evaluate", "optimize", "sweep", "simulate"):
            assert name in proc.stdout

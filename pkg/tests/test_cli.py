import json
import subprocess
import sys

import numpy as np
import pytest

from pmefront.cli import main
from pmefront.cli import config as runconfig
from pmefront.errors import InvalidParameters


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "pmefront.cli", *args], capture_output=True, text=True)


class TestConfig:
    def test_defaults_documented(self):
        vals = runconfig.parse_text("")
        assert set(vals) == set(runconfig.KEYS)
        assert all(entry.doc for entry in runconfig.KEYS.values())

    def test_round_trip(self):
        vals = runconfig.parse_text("m = 3  # comment\ndim=2\nsnapshot_times = 1, 2.5\n")
        assert vals["m"] == 3.0 and vals["dim"] == 2 and vals["snapshot_times"] == (1.0, 2.5)
        assert runconfig.parse_text(runconfig.dump(vals)) == vals

    @pytest.mark.parametrize("text", ["bogus = 1", "m = two", "dim = 1.5", "m 2", "m = 2\nm = 3"])
    def test_rejects(self, text):
        with pytest.raises(InvalidParameters):
            runconfig.parse_text(text)


class TestWave:
    def test_m2(self, capsys):
        assert main(["wave", "--m", "2"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["c"] == pytest.approx(1.0, abs=1e-6)
        assert rep["cstar"] == pytest.approx(0.5, abs=2e-3)
        assert set(rep) >= {"m", "alpha", "c", "c_prime", "cstar", "gamma", "residuals"}

    def test_invalid_m(self, capsys):
        assert main(["wave", "--m", "1.0"]) == 2
        assert "m > 1" in capsys.readouterr().err

    def test_lipschitz_between_calls(self, capsys):
        main(["wave", "--m", "2", "--alpha", "0.3"])
        c3 = json.loads(capsys.readouterr().out)["c"]
        main(["wave", "--m", "2", "--alpha", "0.2"])
        c2 = json.loads(capsys.readouterr().out)["c"]
        assert 0.0 <= c2 - c3 <= 2 * 0.1

    def test_profile_csv(self, tmp_path, capsys):
        assert main(["wave", "--m", "2", "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "profile.csv").read_text().splitlines()
        assert lines[0] == "x,phi,Phi"
        assert lines[-1] == "0,0,0"
        assert (tmp_path / "wave.json").exists()


def write_config(path, **kw):
    base = {"m": 2, "dim": 1, "t_end": 4, "u0_radius": 2, "snapshot_times": "2,4"}
    base.update(kw)
    path.write_text("\n".join(f"{k} = {v}" for k, v in base.items()) + "\n")
    return path


class TestSimulate:
    def test_outputs_and_reproducible(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "run.cfg", out_dir=tmp_path / "a")
        assert main(["simulate", "--config", str(cfg)]) == 0
        out = tmp_path / "a"
        first = {p.name: p.read_bytes() for p in out.iterdir()}
        assert main(["simulate", "--config", str(cfg)]) == 0
        assert "r_max extended" in capsys.readouterr().err
        assert sorted(first) == ["config.txt", "metadata.json", "series.csv", "snap_t2.csv", "snap_t4.csv", "summary.json"]
        for name, data in first.items():
            if name != "metadata.json":
                assert (out / name).read_bytes() == data

    def test_echoed_config_reproduces(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "run.cfg", t_end=2, snapshot_times="")
        main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "a")])
        echoed = tmp_path / "a" / "config.txt"
        main(["simulate", "--config", str(echoed), "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "series.csv").read_bytes() == (tmp_path / "b" / "series.csv").read_bytes()

    def test_zero_data(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "z.cfg", u0_height=0)
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "z")]) == 2

    def test_unknown_key(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "u.cfg", colour="blue")
        assert main(["simulate", "--config", str(cfg)]) == 2

    def test_missing_config(self, tmp_path, capsys):
        assert main(["simulate", "--config", str(tmp_path / "nope.cfg")]) == 2


class TestFit:
    def write_series(self, path, t, h):
        with open(path, "w") as fh:
            fh.write("t,h,hdot,front_flux,max_flux\n")
            for a, b in zip(t, h):
                fh.write(f"{a:.17g},{b:.17g},1,-1,0.25\n")
        return path

    def test_round_trip(self, tmp_path, capsys):
        t = np.linspace(50, 400, 500)
        p = self.write_series(tmp_path / "s.csv", t, t - 0.5 * np.log(t) + 3.0)
        assert main(["fit", "--series", str(p), "--window", "50,400", "--predicted-B", "0.5"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["B_hat"] == pytest.approx(0.5, abs=1e-10)
        assert rep["c_hat"] == pytest.approx(1.0, abs=1e-10)
        assert rep["r0_hat"] == pytest.approx(3.0, abs=1e-9)
        assert rep["ratio"] == pytest.approx(1.0, abs=1e-9)
        assert rep["window"] == [50.0, 400.0]

    def test_three_rows(self, tmp_path, capsys):
        p = self.write_series(tmp_path / "s.csv", [100, 150, 200], [100, 150, 200])
        assert main(["fit", "--series", str(p), "--window", "50,200"]) == 3

    def test_bad_window(self, tmp_path, capsys):
        p = self.write_series(tmp_path / "s.csv", [1, 2], [1, 2])
        assert main(["fit", "--series", str(p), "--window", "abc"]) == 2


class TestVerify:
    def test_unknown_flag(self):
        assert run_cli("verify", "--bogus").returncode == 2

    def test_quick(self, tmp_path):
        out = run_cli("verify", "--quick", "--json", str(tmp_path / "v.json"))
        assert out.returncode == 0, out.stdout + out.stderr
        assert out.stdout.count("[PASS]") == 5
        summary = json.loads((tmp_path / "v.json").read_text())
        assert summary["passed"] and [c["number"] for c in summary["criteria"]] == [1, 2, 3, 4, 5]


@pytest.mark.slow
def test_reference_simulation_1d(tmp_path):
    cfg = tmp_path / "ref.cfg"
    cfg.write_text("m = 2\ndim = 1\ndr = 0.05\nt_end = 200\nu0_radius = 2\n")
    out = run_cli("simulate", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert out.returncode == 0, out.stderr
    data = np.loadtxt(tmp_path / "o" / "series.csv", delimiter=",", skiprows=1)
    assert abs(data[-1, 1] / data[-1, 0] - 1.0) < 0.03
    fit = run_cli("fit", "--series", str(tmp_path / "o" / "series.csv"), "--window", "50,200")
    assert fit.returncode == 0 and abs(json.loads(fit.stdout)["B_hat"]) < 0.05

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from existence.cli import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main

SMALL_SWEEP = ["bichro", "sweep", "--vmin", "-4", "--vmax", "4", "--steps", "5",
               "--average-periods", "10", "--discard-periods", "4", "--discard-lifetimes", "1",
               "--positions", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_rows(text):
    return [line for line in text.splitlines() if line and not line.startswith("#")]


class TestShm:
    def test_csv_shape_and_values(self, capsys):
        code, out, _ = run(capsys, "shm", "--samples-per-period", "256", "--periods", "2")
        assert code == EXIT_OK
        rows = data_rows(out)
        assert rows[0] == "t,x,e,F,Qe,el_residual"
        body = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
        assert body.shape == (513, 6)
        # odd prefixes close with one trapezoid panel, O(dt^3) per sample
        np.testing.assert_allclose(body[:, 2], np.sin(body[:, 0]), atol=5e-6)
        np.testing.assert_allclose(body[:, 3], -body[:, 1], atol=1e-15)

    def test_echo_parameters(self, capsys):
        _, out, _ = run(capsys, "shm", "--omega", "2", "--samples-per-period", "16")
        assert "# command = existence shm" in out
        assert "# omega = 2.0" in out

    def test_gnuplot_needs_out(self, capsys):
        code, out, err = run(capsys, "shm", "--gnuplot", "plot.gp")
        assert code == EXIT_USAGE
        assert out == ""

    def test_gnuplot_script(self, capsys, tmp_path):
        csv, gp = tmp_path / "shm.csv", tmp_path / "shm.gp"
        code, _, _ = run(capsys, "shm", "--samples-per-period", "16", "--out", str(csv),
                         "--gnuplot", str(gp))
        assert code == EXIT_OK
        assert str(csv) in gp.read_text()
        assert csv.read_text().count("\n") > 16


class TestLorentz:
    def test_row(self, capsys):
        code, out, _ = run(capsys, "lorentz", "--u", "0.6", "--ct", "1")
        assert code == EXIT_OK
        header, row = out.splitlines()
        assert header == "v2,x2,ct2,e2"
        v2, x2, ct2, e2 = map(float, row.split(","))
        assert (v2, x2, ct2) == pytest.approx((0.6, 0.75, 1.25))

    @pytest.mark.parametrize("flag", ["--u", "--v"])
    def test_superluminal(self, capsys, flag):
        code, _, err = run(capsys, "lorentz", flag, "1.0")
        assert code == EXIT_USAGE
        assert "below c" in err


class TestAction:
    def test_quantum_number(self, capsys):
        code, out, _ = run(capsys, "action", "--n", "3")
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["nearest_n"] == 3
        assert abs(payload["n_fit"] - 3) <= 1e-6
        assert payload["Fde_sign"] == -1
        assert payload["pdx"] == pytest.approx(payload["E_over_nu"], rel=1e-9)

    def test_n_and_x0_exclusive(self, capsys):
        code, _, _ = run(capsys, "action", "--n", "1", "--x0", "2")
        assert code == EXIT_USAGE


def test_canon_check(capsys):
    code, out, _ = run(capsys, "canon", "check", "--points", "20")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["el_residual_max"] <= 1e-6
    assert payload["bracket_eF_abs_max_deviation"] <= 1e-10
    assert payload["dirac_commutator_eF"] == -1


class TestUsage:
    @pytest.mark.parametrize("argv", [[], ["nonsense"], ["shm", "--m", "-1"], ["shm", "--m", "abc"],
                                      ["shm", "--periods", "0"], ["bichro", "sweep", "--rabi", "1",
                                                                  "--practical"]])
    def test_bad_arguments(self, capsys, argv):
        assert run(capsys, *argv)[0] == EXIT_USAGE

    def test_missing_config(self, capsys, tmp_path):
        assert run(capsys, "shm", "--config", str(tmp_path / "none.cfg"))[0] == EXIT_IO

    def test_missing_input(self, capsys, tmp_path):
        assert run(capsys, "bichro", "analyze", str(tmp_path / "none.csv"))[0] == EXIT_IO

    def test_numeric_failure(self, capsys):
        code, _, err = run(capsys, *SMALL_SWEEP, "--rtol", "1e-300", "--atol", "1e-300")
        assert code == EXIT_NUMERIC
        assert "numerical error" in err


class TestConfig:
    def test_file_supplies_defaults(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# oscillator\nomega = 3\nsamples-per-period = 8\n")
        _, out, _ = run(capsys, "shm", "--config", str(cfg))
        assert "# omega = 3.0" in out
        assert len(data_rows(out)) == 10

    def test_flags_override_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("omega = 3\nsamples_per_period = 8\n")
        _, out, _ = run(capsys, "shm", "--config", str(cfg), "--omega", "5")
        assert "# omega = 5.0" in out

    @pytest.mark.parametrize("text", ["bogus = 1\n", "omega 3\n", "omega = -2\n"])
    def test_bad_file(self, capsys, tmp_path, text):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(text)
        assert run(capsys, "shm", "--config", str(cfg))[0] == EXIT_USAGE


class TestBichro:
    def test_sweep_csv(self, capsys, tmp_path):
        out_csv = tmp_path / "curve.csv"
        code, _, _ = run(capsys, *SMALL_SWEEP, "--out", str(out_csv), "--jobs", "1")
        assert code == EXIT_OK
        text = out_csv.read_text()
        assert "# rabi_preset = pi-pulse" in text
        assert "# force_units = hbar*k*gamma" in text
        rows = data_rows(text)
        assert rows[0] == "v,F_mean,F_spread"
        assert len(rows) == 6

    def test_explicit_units_scale(self, capsys, tmp_path):
        # doubling the linewidth at fixed delta/gamma leaves the reduced curve unchanged
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, *SMALL_SWEEP, "--out", str(a), "--jobs", "1")
        run(capsys, *SMALL_SWEEP, "--out", str(b), "--jobs", "1", "--unit-system", "explicit",
            "--linewidth", "2", "--delta", "80", "--rabi", str(20 * math.pi))
        fa = np.array([r.split(",")[1] for r in data_rows(a.read_text())[1:]], dtype=float)
        fb = np.array([r.split(",")[1] for r in data_rows(b.read_text())[1:]], dtype=float)
        np.testing.assert_allclose(fa, fb, rtol=1e-5, atol=1e-6)

    def test_analyze_synthetic(self, capsys, tmp_path):
        v = np.arange(0.0, 48.0, 0.02)
        f = sum(n * 0.5 * np.exp(-0.5 * ((v - 40.0 / n) / 0.4) ** 2) for n in (1, 2, 3, 4))
        src = tmp_path / "syn.csv"
        src.write_text("# omega_r = 40\nv,F_mean\n" + "".join(f"{a:.17g},{b:.17g}\n" for a, b in zip(v, f)))
        peaks = tmp_path / "peaks.csv"
        code, out, _ = run(capsys, "bichro", "analyze", str(src), "--peaks-out", str(peaks))
        assert code == EXIT_OK
        report = json.loads(out)
        assert sorted(p["n_nearest"] for p in report["peaks"]) == [1, 2, 3, 4]
        assert all(fit["mismatch"] < 0.02 for fit in report["velocity_fits"])
        assert data_rows(peaks.read_text())[0] == "v_peak,F_peak,n,residual"

    def test_analyze_without_rabi(self, capsys, tmp_path):
        src = tmp_path / "syn.csv"
        src.write_text("v,F_mean\n0,0\n1,1\n2,0\n")
        code, out, _ = run(capsys, "bichro", "analyze", str(src))
        assert code == EXIT_OK
        assert json.loads(out)["velocity_fits"][0]["v_n"] is None

    def test_analyze_malformed(self, capsys, tmp_path):
        src = tmp_path / "bad.csv"
        src.write_text("a,b\n1,2\n")
        assert run(capsys, "bichro", "analyze", str(src))[0] == EXIT_USAGE

    def test_sweep_deterministic_across_workers(self, tmp_path):
        outs = []
        for jobs in ("1", "2", "2"):
            path = tmp_path / f"c{len(outs)}.csv"
            subprocess.run([sys.executable, "-m", "existence", *SMALL_SWEEP, "--jobs", jobs,
                            "--out", str(path)], check=True)
            outs.append(path.read_bytes())
        assert outs[0] == outs[1] == outs[2]

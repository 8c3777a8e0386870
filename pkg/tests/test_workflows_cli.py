import io
import math
import shutil
import subprocess

import numpy as np
import pytest

from dopedom.cli import main
from dopedom.config import serialize_params
from dopedom.errors import ConfigError, SolverError, ValidationError
from dopedom.model import linearize
from dopedom.presets import PRESETS
from dopedom.stability import check_stability
from dopedom.workflows import (COLUMNS, SweepSpec, at_axis, emit_plot_data, evaluate_point,
                               golden_section, optimize_detuning, read_plot_data,
                               read_sweep_csv, run_sweep, write_sweep_csv)

from conftest import FIG2A

FIXED_TIME = "2000-01-01T00:00:00+00:00"


@pytest.fixture
def fig2a_ini(tmp_path):
    path = tmp_path / "fig2a.ini"
    path.write_text(serialize_params(PRESETS["fig2a"].params))
    return path


def sweep_text(p, spec, rows):
    buf = io.StringIO()
    write_sweep_csv(buf, rows, p, spec, timestamp=FIXED_TIME)
    return buf.getvalue()


def test_point_report_fig2a():
    r = evaluate_point(FIG2A, "both", compare_standard=True)
    assert r.stable
    assert r.covariance.n_f_q == pytest.approx(1.49900046669, rel=1e-9)
    assert abs(r.spectrum.n_f_spectral - r.covariance.n_f_q) < 0.01 * r.covariance.n_f_q
    assert r.standard.n_f == pytest.approx(963.890796403, rel=1e-9)
    text = r.to_text()
    assert "n_f_lyapunov = 1.49900046669" in text and "[regime]" in text


def test_point_report_uncoupled_is_thermal():
    r = evaluate_point(FIG2A.replace(g=0.0, G=0.0))
    assert r.covariance.n_f_q == pytest.approx(1000.0, rel=1e-12)


def test_point_report_unstable_has_no_occupation():
    r = evaluate_point(PRESETS["fig3a"].params.replace(delta_c=2.0))
    assert not r.stable and r.covariance is None and r.spectrum is None
    assert "n_f_lyapunov" not in r.to_text()


def test_sweep_spec_validation():
    with pytest.raises(ValidationError):
        SweepSpec("delta_a", 1.0, 1.0, 10)
    with pytest.raises(ValidationError):
        SweepSpec("delta_x", 0.0, 1.0, 10)
    with pytest.raises(ValidationError):
        SweepSpec("delta_a", 0.0, 1.0, 100_001)
    with pytest.raises(ValidationError):
        SweepSpec("delta_a", 0.0, 1.0, 1)


def test_sweep_rows_follow_stability():
    pr = PRESETS["fig2a"]
    spec = pr.sweep(points=41, routes="both", compare_standard=True)
    rows = run_sweep(pr.params, spec)
    assert [r.axis_value for r in rows] == pytest.approx(list(spec.values()))
    for row in rows:
        verdict = check_stability(linearize(at_axis(pr.params, spec.axis, row.axis_value)))
        assert row.stable == verdict.stable
        if row.stable:
            assert row.n_f_lyapunov is not None and row.n_f_spectral is not None
        else:
            assert row.n_f_lyapunov is None and row.n_f_spectral is None
    assert any(not r.stable for r in rows)


def test_sweep_csv_is_deterministic():
    pr = PRESETS["fig4b"]
    spec = pr.sweep(points=30)
    a = sweep_text(pr.params, spec, run_sweep(pr.params, spec))
    b = sweep_text(pr.params, spec, run_sweep(pr.params, spec))
    assert a == b
    header = [l for l in a.splitlines() if not l.startswith("#")][0]
    assert tuple(header.split(",")) == COLUMNS
    assert "# config.coupling.g: 0.8" in a and "# sweep.axis: delta_polariton" in a


def test_parallel_matches_serial():
    pr = PRESETS["fig3a"]
    spec = pr.sweep(points=24, routes="both", compare_standard=True)
    assert run_sweep(pr.params, spec, workers=2) == run_sweep(pr.params, spec, workers=1)


def test_csv_round_trip_and_plot_data(tmp_path):
    pr = PRESETS["fig2a"]
    spec = pr.sweep(points=25, compare_standard=True)
    rows = run_sweep(pr.params, spec)
    path = tmp_path / "f.csv"
    write_sweep_csv(path, rows, pr.params, spec)
    meta, parsed = read_sweep_csv(path)
    assert meta["sweep.axis"] == "delta_a" and meta["units"] == "omega_m"
    for row, back in zip(rows, parsed):
        assert back["stable"] == row.stable
        if row.n_f_lyapunov is not None:
            assert back["n_f_lyapunov"] == pytest.approx(row.n_f_lyapunov, rel=1e-11)
    paths = emit_plot_data(path)
    doped = read_plot_data(paths["doped"])
    standard = read_plot_data(paths["standard"])
    stable = [r for r in parsed if r["stable"]]
    assert doped.shape == (len(stable), 2)
    # plot files reproduce the CSV values exactly
    np.testing.assert_array_equal(doped[:, 1], [r["n_f_lyapunov"] for r in stable])
    assert standard.shape[0] == sum(r["n_f_standard"] is not None for r in parsed)
    head = paths["doped"].read_text().splitlines()[:4]
    assert "# yscale: log" in head


def test_plot_data_all_unstable(tmp_path):
    p = PRESETS["fig3b"].params
    spec = SweepSpec("delta_c", 1.0, 5.0, 5)
    rows = run_sweep(p, spec)
    assert not any(r.stable for r in rows)
    path = tmp_path / "u.csv"
    write_sweep_csv(path, rows, p, spec)
    with pytest.warns(UserWarning, match="no stable points"):
        paths = emit_plot_data(path, tmp_path / "out")
    assert read_plot_data(paths["doped"]).size == 0


@pytest.mark.parametrize("text", ["axis_value,n_f\n1,2\n", "axis_value,stable\n1,maybe\n",
                                  "axis_value,stable\n1\n", "# only metadata\n"])
def test_malformed_sweep_csv(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ConfigError):
        read_sweep_csv(path)


def test_golden_section_quadratic():
    x, y, n = golden_section(lambda t: (t - 0.3)**2, -1.0, 2.0, tol=1e-10)
    assert x == pytest.approx(0.3, abs=1e-8) and n < 100


def test_optimizer_never_exceeds_scan():
    pr = PRESETS["fig3a"]
    res = optimize_detuning(pr.params, "delta_c", -15.0, -2.0, scan_points=41)
    assert res.n_f <= np.min(res.scan_n_f)
    assert -10.0 < res.x < -5.0 and res.n_f < 1.0


def test_standard_optimizer_good_cavity():
    p = PRESETS["fig3a"].params
    res = optimize_detuning(p, "delta_c", 0.2, 3.0, scan_points=57, standard=True)
    assert res.x == pytest.approx(1.0, abs=0.05)


def test_optimizer_without_stable_points():
    with pytest.raises(SolverError):
        optimize_detuning(PRESETS["fig3b"].params, "delta_c", 1.0, 5.0, scan_points=5)


# -- command line -------------------------------------------------------------

def test_cli_point(fig2a_ini, capsys, tmp_path):
    out = tmp_path / "spec.csv"
    code = main(["point", "--config", str(fig2a_ini), "--set", "delta_a=1",
                 "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "n_f_lyapunov = 1.49900046669" in text
    assert out.read_text().startswith("omega,S_q\n")


def test_cli_uncoupled_point(fig2a_ini, capsys):
    assert main(["point", "--config", str(fig2a_ini), "--set", "g=0", "--set", "G=0"]) == 0
    assert "n_f_lyapunov = 1000\n" in capsys.readouterr().out


def test_cli_exit_codes(fig2a_ini, tmp_path):
    assert main(["point", "--config", str(fig2a_ini), "--set", "delta_a=-1"]) == 3
    assert main(["point", "--config", str(fig2a_ini), "--set", "kappa=0"]) == 2
    assert main(["point", "--config", str(tmp_path / "missing.ini")]) == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[rates]\nkappa = 1\n")
    assert main(["regimes", "--config", str(bad)]) == 2
    assert main(["optimize", "--config", str(fig2a_ini), "--axis", "delta_a",
                 "--range=-1.2:-0.9", "--points", "4"]) == 4


def test_cli_sweep_and_plot_data(fig2a_ini, tmp_path, capsys):
    csv_path = tmp_path / "s.csv"
    assert main(["sweep", "--config", str(fig2a_ini), "--axis", "delta_a", "--range=-2:3",
                 "--points", "11", "--compare-standard", "--out", str(csv_path)]) == 0
    meta, rows = read_sweep_csv(csv_path)
    assert len(rows) == 11 and meta["sweep.compare_standard"] == "true"
    assert main(["plot-data", str(csv_path), "--out", str(tmp_path / "plots")]) == 0
    assert (tmp_path / "plots" / "s.doped.dat").exists()
    assert main(["sweep", "--config", str(fig2a_ini), "--axis", "delta_a", "--range=3:-2"]) == 2


def test_cli_sweep_to_stdout(fig2a_ini, capsys):
    assert main(["sweep", "--config", str(fig2a_ini), "--axis", "delta_c",
                 "--range=0:2", "--points", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[-4] == ",".join(COLUMNS)


def test_cli_optimize_standard(fig2a_ini, capsys):
    assert main(["optimize", "--config", str(fig2a_ini), "--standard",
                 "--range=0.5:15", "--points", "60"]) == 0
    out = capsys.readouterr().out
    x = float(out.split("delta_c = ")[1].split()[0])
    assert abs(x - 10 / math.sqrt(3)) < 0.1 * 10 / math.sqrt(3)


def test_cli_regimes(fig2a_ini, capsys):
    assert main(["regimes", "--config", str(fig2a_ini)]) == 0
    out = capsys.readouterr().out
    assert "cooperativity = 0.001" in out and "bad_cavity = true" in out


@pytest.mark.skipif(shutil.which("dopedom") is None, reason="console script not installed")
def test_console_script(fig2a_ini):
    proc = subprocess.run(["dopedom", "regimes", "--config", str(fig2a_ini)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "delta_0 = 0.9999" in proc.stdout

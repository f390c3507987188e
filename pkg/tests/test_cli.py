import json
import subprocess
import sys

import numpy as np
import pytest

from thermoflux.cli import main


def _run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_stats_text(capsys):
    code, out, _ = _run(["stats", "--a", "1", "--beta", "1", "--N", "1"], capsys)
    assert code == 0
    values = dict(
        line.split(" = ") for line in out.strip().splitlines() if " = " in line
    )
    assert float(values["mean"]) == pytest.approx(0.5819767068693265)
    assert float(values["variance"]) == pytest.approx(0.9206735942077924)


def test_stats_json_schema(capsys):
    code, out, _ = _run(
        ["stats", "--a", "1", "--beta", "1", "--N", "1", "--json"], capsys
    )
    doc = json.loads(out)
    assert set(doc) == {"config", "results", "diagnostics", "version"}
    assert doc["results"]["mean"] == pytest.approx(0.5819767068693265)


def test_stats_units_cgs(capsys):
    _, internal, _ = _run(["stats", "--a", "1", "--beta", "1", "--N", "1", "--json"], capsys)
    _, cgs, _ = _run(
        ["stats", "--a", "1", "--beta", "1", "--N", "1", "--json", "--units", "cgs"],
        capsys,
    )
    di, dc = json.loads(internal), json.loads(cgs)
    kb = 1.3806488e-16
    assert dc["results"]["entropy"] == pytest.approx(di["results"]["entropy"] * kb)
    assert dc["results"]["variance_eps"] == pytest.approx(
        di["results"]["variance_eps"] * kb
    )
    assert dc["results"]["mean"] == di["results"]["mean"]  # not k_B-bearing


def test_dual_json(capsys):
    code, out, _ = _run(
        ["dual", "--a", "1", "--beta", "1", "--N", "100", "--variant", "remark1"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["a_dual"] == pytest.approx(0.086161269630487557, rel=1e-10)
    assert doc["results"]["beta_dual"] == pytest.approx(0.95924432845858624, rel=1e-10)
    assert max(doc["results"]["residuals"]) < 1e-10


def test_cumulants_output_file(tmp_path, capsys):
    path = tmp_path / "k.csv"
    code, out, _ = _run(
        ["cumulants", "--a", "1", "--beta", "1", "--N", "1", "--order", "3",
         "--output", str(path)],
        capsys,
    )
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "order,value"
    assert float(lines[3].split(",")[1]) == pytest.approx(1.9922947671249874)


def test_homotopy_table(capsys):
    code, out, _ = _run(
        ["homotopy", "--a", "1", "--beta", "1", "--N", "100", "--num-t", "5"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("t,a_t,beta_t")
    assert len(lines) == 6


def test_sample_deterministic_csv(tmp_path, capsys):
    p1, p2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
    for p in (p1, p2):
        code, _, _ = _run(
            ["sample", "--a", "1", "--beta", "1", "--N", "10", "--sweeps", "500",
             "--seed", "7", "--output", str(p)],
            capsys,
        )
        assert code == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_sample_check_zscores(capsys):
    code, out, _ = _run(
        ["sample", "--a", "1", "--beta", "1", "--N", "50", "--sweeps", "20000",
         "--seed", "3", "--check", "--json"],
        capsys,
    )
    doc = json.loads(out)
    assert max(abs(z) for z in doc["diagnostics"]["z_scores"]) < 6.0


def test_reconstruct_writes_artifacts(tmp_path, capsys):
    path = tmp_path / "grid.csv"
    code, out, _ = _run(
        ["reconstruct", "--a", "1", "--beta", "1", "--N", "100",
         "--family", "gaussian", "--n-theta", "32", "--grid-points", "21",
         "--n-r", "48", "--output", str(path), "--gnuplot", "--json"],
        capsys,
    )
    assert code == 0
    assert path.exists()
    header = json.loads((tmp_path / "grid.csv.json").read_text())
    assert header["diagnostics"]["purity"] == pytest.approx(1.0, abs=1e-3)
    assert (tmp_path / "grid.csv.gp").read_text().startswith("# gnuplot companion")
    doc = json.loads(out)
    assert doc["results"]["mass"] == pytest.approx(1.0, abs=1e-4)


def test_tomogram_command(tmp_path, capsys):
    path = tmp_path / "tom.csv"
    code, out, _ = _run(
        ["tomogram", "--a", "1", "--beta", "1", "--N", "100", "--t", "0.0",
         "--n0", "4", "--output", str(path), "--json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["variance"] == pytest.approx(0.009206735942077922, rel=1e-10)
    assert len(path.read_text().splitlines()) == 202


def test_config_file_merged_under_flags(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("beta=2.0\na=1.0\nN=1\n# comment line\n")
    code, out, _ = _run(["stats", "--config", str(cfg), "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["epsilon"] == pytest.approx(1.0 / (np.e**2 - 1.0))
    # flags win over config
    code, out, _ = _run(
        ["stats", "--config", str(cfg), "--beta", "1.0", "--json"], capsys
    )
    assert json.loads(out)["results"]["mean"] == pytest.approx(0.5819767068693265)


def test_missing_parameter_exit_2(capsys):
    code, _, err = _run(["stats", "--a", "1", "--beta", "1"], capsys)
    assert code == 2
    assert "--N".lower() in err.lower() or "n" in err.lower()


def test_divergent_config_exit_2(capsys):
    code, _, err = _run(["stats", "--a", "-1", "--beta", "1", "--N", "1"], capsys)
    assert code == 2
    assert "beta*a" in err


def test_numerical_failure_exit_3(capsys):
    # homotopy table through the degenerate angle
    code, out, _ = _run(
        ["homotopy", "--a", "1", "--beta", "1", "--N", "100", "--t-max", "3.1",
         "--num-t", "9"],
        capsys,
    )
    assert code == 3
    payload = json.loads(out.strip().splitlines()[-1])
    assert payload["error"] == "DegeneratePoint"


def test_verify_subcommand(capsys):
    code, out, _ = _run(["verify", "--suite", "coefficients"], capsys)
    assert code == 0
    assert all(line.startswith("PASS") for line in out.strip().splitlines())


def test_byte_identical_output():
    cmd = [sys.executable, "-m", "thermoflux.cli", "dual", "--a", "1", "--beta",
           "1", "--N", "100", "--variant", "symmetric"]
    r1 = subprocess.run(cmd, capture_output=True)
    r2 = subprocess.run(cmd, capture_output=True)
    assert r1.stdout == r2.stdout and r1.returncode == 0

import csv
import io

import pytest
import yaml

from nubound import angular, cli, radial

HRS0 = "family = hrs\nDe = 4\nre = 1\nB = 0\nC = 0\nD = 0\nF = 0\nG = 0\n"
RSO0 = "family = rso\nkappa = 4\nr0 = 1\nn0_max = 1\nnr_max = 1\n"
MIXED = "family = hrs\nDe = 2\nre = 0.8\nB = 0.3\nC = 0.7\nD = 0.1\nF = 0.4\nG = 0.25\nn0_max = 1\nnr_max = 1\n"


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_hrs(tmp_path, capsys):
    code, out, _ = run(["spectrum", "--config", write(tmp_path, HRS0)], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n0,nr,Msq_paper,Msq_nu,E_paper,E_derived"
    row = lines[1].split(",")
    assert row[:4] == ["0", "0", "3", "4"]
    # E_paper is evaluated at Msq_paper, E_derived at Msq_nu
    assert float(row[4]) == pytest.approx(radial.hrs_energy_paper(radial.KratzerParams(4, 1), 3, 0), rel=1e-15)
    assert float(row[5]) == pytest.approx(1.9636125065416614, rel=1e-15)


def test_spectrum_rso_and_format(tmp_path, capsys):
    code, out, _ = run(["spectrum", "--config", write(tmp_path, RSO0)], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert [(r["n0"], r["nr"]) for r in rows] == [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]
    r0 = rows[0]
    assert float(r0["E_paper"]) == pytest.approx(0.5 - (1 + 2))
    assert float(r0["E_derived"]) == pytest.approx(1 + (2 + 20**0.5) / 2)
    assert r0["E_derived"] == "%.17g" % float(r0["E_derived"])


def test_spectrum_to_file(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, stdout, _ = run(["spectrum", "--config", write(tmp_path, RSO0), "--out", str(out)], capsys)
    assert code == 0 and stdout == "" and out.read_text().startswith("n0,nr")


def test_config_error_exit_code(tmp_path, capsys):
    code, _, err = run(["spectrum", "--config", write(tmp_path, "")], capsys)
    assert code == 2 and "family" in err
    code, _, err = run(["verify", "--config", write(tmp_path, "family = hrs\nDe = -1\nre = 1\n")], capsys)
    assert code == 2 and "line 2" in err


def test_wavefunction_polar_and_cartesian(tmp_path, capsys):
    cfg = write(tmp_path, MIXED)
    code, out, _ = run(["wavefunction", "--config", cfg, "--grid", "3,3"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "r,phi,psi" and len(lines) == 10
    code, out, _ = run(["wavefunction", "--config", cfg, "--grid", "3,3", "--cartesian"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 9 and list(rows[0]) == ["x", "y", "psi"]
    # the centre row and column lie on the axes
    assert all(float(r["psi"]) == 0.0 for r in rows if float(r["x"]) == 0 or float(r["y"]) == 0)


def test_wavefunction_missing_state(tmp_path, capsys):
    cfg = write(tmp_path, "family = hrs\nDe = 2\nre = 1\ncoulomb = repulsive\n")
    code, _, err = run(["wavefunction", "--config", cfg], capsys)
    assert code == 3 and "bound state" in err


def test_verify_zero_noncentral_reports_paper_delta(tmp_path, capsys):
    code, out, _ = run(["verify", "--config", write(tmp_path, HRS0)], capsys)
    rep = yaml.safe_load(out)
    assert code == 0 and rep["status"] == "PASS"
    st = rep["states"][0]
    assert st["Msq_paper"] == 3 and st["Msq_nu"] == pytest.approx(4, abs=1e-9)
    assert st["deltas"]["Msq_paper_minus_nu"] == pytest.approx(-1, abs=1e-9)


def test_verify_rso_reports_sign_flip(tmp_path, capsys):
    code, out, _ = run(["verify", "--config", write(tmp_path, RSO0)], capsys)
    rep = yaml.safe_load(out)
    assert code == 0 and rep["status"] == "PASS"
    for st in rep["states"]:
        assert st["formula_checks"]["sign_flip_relation_defect"] == pytest.approx(0, abs=1e-10)
        assert st["deltas"]["E_paper_minus_derived"] < -1


def test_verify_repulsive(tmp_path, capsys):
    code, out, _ = run(["verify", "--config", write(tmp_path, "family = hrs\nDe = 2\nre = 1\ncoulomb = repulsive\n")],
                       capsys)
    rep = yaml.safe_load(out)
    assert code == 0 and rep["states"][0]["bound_state"] is False


def test_verify_deterministic(tmp_path, capsys):
    cfg = write(tmp_path, MIXED)
    a, b = tmp_path / "a.yaml", tmp_path / "b.yaml"
    assert run(["verify", "--config", cfg, "--out", str(a)], capsys)[0] == 0
    assert run(["verify", "--config", cfg, "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert "config_sha256" in a.read_text()


def test_verify_fails_with_tight_tolerance(tmp_path, capsys):
    cfg = write(tmp_path, MIXED + "tol_eigen = 1e-16\n")
    code, out, err = run(["verify", "--config", cfg], capsys)
    assert code == 1 and yaml.safe_load(out)["status"] == "FAIL" and "FAIL" in err


def test_paper_formulas_do_not_feed_checks(tmp_path, capsys, monkeypatch):
    cfg = write(tmp_path, MIXED)
    code, out, _ = run(["verify", "--config", cfg], capsys)
    clean = yaml.safe_load(out)
    monkeypatch.setattr(angular, "m_squared_paper", lambda bp, n0: 1e6)
    monkeypatch.setattr(radial, "hrs_energy_paper", lambda *a, **k: -1e9)
    code2, out2, _ = run(["verify", "--config", cfg], capsys)
    dirty = yaml.safe_load(out2)
    assert code == code2 == 0 and clean["status"] == dirty["status"] == "PASS"
    for a, b in zip(clean["states"], dirty["states"]):
        for key in ("Msq_nu", "Msq_oracle", "E_derived", "E_oracle"):
            assert a[key] == b[key]
    assert dirty["states"][0]["Msq_paper"] == 1e6

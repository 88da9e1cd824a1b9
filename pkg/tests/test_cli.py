import json
import subprocess
import sys

import numpy as np
import pytest

from cliffwave.algebra import Multivector
from cliffwave.cli import UsageError, evaluate_expression, main
from cliffwave.io import load_field, load_tensor

from test_config import CONFIGS


def run(argv):
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


# expressions


@pytest.mark.parametrize(
    "text, expected",
    [
        ("e1*e2", Multivector.blade(3, "e12")),
        ("e21", -Multivector.blade(3, "e12")),
        ("e1*e1", Multivector.scalar(3, -1.0)),
        ("(e1 + e2) * e1", Multivector.from_dict(3, {"1": -1.0, "e12": -1.0})),
        ("rev(e12 + e3)", Multivector.from_dict(3, {"e12": -1.0, "e3": 1.0})),
        ("dag(2j*e1)", Multivector.from_dict(3, {"e1": 2j})),
        ("e123**2", Multivector.scalar(3, 1.0)),
        ("grade(1 + e1 + e23, 2)", Multivector.blade(3, "e23")),
        ("e12 / 2", Multivector.from_dict(3, {"e12": 0.5})),
    ],
)
def test_expressions(text, expected):
    assert evaluate_expression(text, 3) == expected


@pytest.mark.parametrize("text", ["e4", "x + 1", "e1 / e2", "e1 ** -1", "import os", "e1 @ e2", "(", "__import__('os')"])
def test_rejected_expressions(text):
    with pytest.raises(UsageError):
        evaluate_expression(text, 3)


def test_algebra_command(capsys):
    assert run(["algebra", "--n", "2", "e1*e2", "e12*e12"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["e1*e2 = 1·e12", "e12*e12 = -1"]
    assert run(["algebra", "--n", "2", "--table"]) == 0
    table = capsys.readouterr().out.splitlines()
    assert table[0] == "*,1,e1,e2,e12"
    assert table[4] == "e12,e12,e2,-e1,-1"
    assert run(["algebra", "--n", "2", "e3"]) == 1


# files


def test_gen_round_trip(tmp_path):
    path = tmp_path / "psi.cfld"
    assert run(["gen", "--wavelet", "vector-gaussian", "--n", "2", "--shape", "65", "--span", "8", "--out", str(path)]) == 0
    f = load_field(path)
    assert f.grid.shape == (65, 65) and f.grid.spacing == (0.25, 0.25)
    assert f.data[..., 1].real.max() > 0
    js = tmp_path / "g.json"
    assert run(["gen", "--field", "gaussian", "--shape", "17", "--out", str(js), "--json"]) == 0
    assert load_field(js).data[8, 8, 0] == 1.0
    assert run(["gen", "--field", "gaussian", "--shape", "16", "--out", str(js)]) == 1


def test_cft_twice_returns_original(tmp_path):
    src, hat, back = tmp_path / "psi.cfld", tmp_path / "psi_hat.cfld", tmp_path / "psi_back.cfld"
    assert run(["gen", "--wavelet", "mexican-hat", "--out", str(src)]) == 0
    assert run(["cft", "--in", str(src), "--out", str(hat)]) == 0
    assert json.loads(hat.read_bytes()[12:].split(b"}")[0] + b"}")["domain"] == "frequency"
    assert run(["cft", "--in", str(hat), "--out", str(back), "--inverse"]) == 0
    assert np.abs(load_field(back).data - load_field(src).data).max() <= 1e-10
    # wrong direction is a validation error
    assert run(["cft", "--in", str(src), "--out", str(back), "--inverse"]) == 1


def test_bad_magic_reports_offset(tmp_path, capsys):
    path = tmp_path / "bad.cfld"
    path.write_bytes(b"NOTAFILE" + bytes(32))
    assert run(["cft", "--in", str(path), "--out", str(tmp_path / "x.cfld")]) == 1
    assert "offset 0" in capsys.readouterr().err


def test_missing_file_and_unknown_command(tmp_path, capsys):
    assert run(["cft", "--in", str(tmp_path / "nope.cfld"), "--out", str(tmp_path / "x")]) == 1
    assert run(["frobnicate"]) == 1
    assert run([]) == 1


def test_admissibility_command(tmp_path, capsys):
    profile = tmp_path / "profile.csv"
    assert run(["admissibility", "--wavelet", "mexican-hat", "--shape", "33", "--profile", str(profile)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["C_psi"] == pytest.approx(0.5, rel=0.02) and doc["admissible"] is True
    assert profile.read_text().startswith("radius,mean_density")
    assert run(["admissibility", "--wavelet", "gaussian", "--shape", "33"]) == 2


def test_cwt_reconstruct_uncertainty_pipeline(tmp_path, capsys):
    field, coeffs, rec = tmp_path / "f.cfld", tmp_path / "t.cwtt", tmp_path / "r.cfld"
    assert run(["gen", "--field", "vector-gaussian", "--shape", "33", "--out", str(field)]) == 0
    assert run(["cwt", "--in", str(field), "--wavelet", "mexican-hat", "--scales", "2^-3:2^3:16", "--spins", "4", "--out", str(coeffs)]) == 0
    T = load_tensor(coeffs)
    assert T.coefficients.shape == (16, 4, 33, 33, 4)
    assert run(["reconstruct", "--in", str(coeffs), "--wavelet", "mexican-hat", "--out", str(rec)]) == 0
    f, g = load_field(field), load_field(rec)
    assert np.linalg.norm(f.data - g.data) <= 0.05 * np.linalg.norm(f.data)
    capsys.readouterr()
    assert run(["uncertainty", "--in", str(field), "--axis", "1", "--wavelet", "mexican-hat", "--scales", "2^-3:2^3:16", "--spins", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["fourier"][0]["ratio"] >= 1
    assert run(["cwt", "--in", str(field), "--wavelet", "file", "--out", str(coeffs)]) == 1


def test_verify_default_config(tmp_path, capsys):
    code = run(["verify", "--suite", "all", "--config", str(CONFIGS / "default.json"), "--report-dir", str(tmp_path)])
    assert code == 0
    doc = json.loads((tmp_path / "default.json").read_text())
    ratios = [c["value"] for c in doc["checks"] if c["check"] == "plancherel"]
    assert ratios and all(0.95 <= r <= 1.05 for r in ratios)
    assert "0 failed" in capsys.readouterr().out


def test_verify_reports_failures_with_exit_2(tmp_path, capsys):
    cfg = tmp_path / "strict.json"
    cfg.write_text(json.dumps({"grid": {"points": 33}, "spins": 4, "corpus": {"fields": ["gaussian"]}, "tolerances": {"plancherel": 1e-6}}))
    assert run(["verify", "plancherel", "--config", str(cfg), "--report-dir", str(tmp_path), "--emit-gnuplot-ready"]) == 2
    out = capsys.readouterr().out
    assert "FAIL wavelet/plancherel" in out
    assert (tmp_path / "report.dat").exists()


def test_verify_invalid_config(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"grid": {"points": 64}}')
    assert run(["verify", "--config", str(cfg)]) == 1
    assert "grid.points" in capsys.readouterr().err


def test_threads_from_environment(tmp_path, monkeypatch):
    from cliffwave.cwt import default_threads

    monkeypatch.setenv("CLIFFWAVE_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("CLIFFWAVE_THREADS", "lots")
    assert default_threads() == 1
    monkeypatch.setenv("CLIFFWAVE_THREADS", "2")
    path = tmp_path / "f.cfld"
    assert run(["gen", "--field", "gaussian", "--shape", "17", "--out", str(path), "--threads", "2"]) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cliffwave", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for command in ("algebra", "cft", "admissibility", "cwt", "reconstruct", "uncertainty", "verify", "gen"):
        assert command in proc.stdout

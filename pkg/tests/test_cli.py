import csv
import io
import json
import math
import subprocess
import sys

import pytest

from warped_spectra.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eigen_sphere(capsys):
    code, out, _ = call(capsys, "eigen", "--builtin", "sphere", "--K", "1", "--n", "3", "--r", "1.5707963")
    data = json.loads(out)
    assert code == 0
    assert data["lambda"] == pytest.approx(3.0, rel=1e-6)
    assert data["method"] == "cross-checked"
    assert set(data) >= {"lambda", "m", "r", "nodes", "residuals", "method"}


def test_closing_length_rational_a(capsys):
    code, out, _ = call(capsys, "closing-length", "--k", "12/(45-(t-3)^2)")
    assert code == 0
    assert json.loads(out)["l"] == pytest.approx(6.0, abs=1e-8)


def test_closing_length_flat(capsys):
    code, out, _ = call(capsys, "closing-length", "--builtin", "flat", "--t-max", "5")
    data = json.loads(out)
    assert code == 0 and data["closes"] is False and data["l"] is None


def test_examples_exit_zero_and_deterministic(capsys):
    code, first, _ = call(capsys, "examples")
    assert code == 0
    assert json.loads(first)["all_pass"] is True
    _, second, _ = call(capsys, "examples")
    assert first == second


def test_examples_subprocess_byte_identical(tmp_path):
    outputs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        subprocess.run([sys.executable, "-m", "warped_spectra", "examples", "--out", str(path)], check=True)
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_examples_against_regenerated_golden(capsys, tmp_path, monkeypatch):
    target = tmp_path / "golden.json"
    monkeypatch.setenv("WARPED_SPECTRA_GOLDEN", str(target))
    code, out, err = call(capsys, "examples", "--write-golden")
    assert code == 0 and target.exists()
    assert json.loads(out)["golden"] == str(target)


def test_examples_detect_tampered_golden(capsys, tmp_path):
    from warped_spectra.reference_examples import DEFAULT_GOLDEN

    data = json.loads(DEFAULT_GOLDEN.read_text())
    data["cases"]["paper-a/n=2/lambda_plus"]["lambda"] *= 1.001
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = call(capsys, "examples", "--golden", str(bad))
    assert code == 1
    failed = [c["id"] for c in json.loads(out)["checks"] if not c["pass"]]
    assert "paper-a/n=2/lambda_plus/oracle" in failed


def test_warp_report(capsys):
    code, out, _ = call(capsys, "warp", "--builtin", "paper-b")
    data = json.loads(out)
    assert code == 0
    assert data["admissibility"]["closes"] is True
    assert data["warp"]["l"] == pytest.approx(8.0)


def test_warp_csv(capsys):
    code, out, _ = call(capsys, "warp", "--k", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["t", "f", "fprime"]
    assert float(rows[-1][0]) == pytest.approx(math.pi)


def test_spectrum(capsys):
    code, out, _ = call(capsys, "spectrum", "--builtin", "sphere", "--n", "2", "--count", "3")
    values = json.loads(out)["eigenvalues"]
    assert code == 0
    assert values[1] == pytest.approx(2.0, rel=1e-6) and values[2] == pytest.approx(6.0, rel=1e-6)


def test_check_exit_codes(capsys):
    code, out, _ = call(capsys, "check", "--builtin", "sphere", "--n", "3", "--claimed-lambda1", "3")
    assert code == 0 and json.loads(out)["conclusion_applicable"] is True
    code, out, _ = call(capsys, "check", "--builtin", "sphere", "--n", "3", "--claimed-lambda1", "2.5")
    assert code == 1 and json.loads(out)["assumption3"]["satisfied"] is False


def test_consistency(capsys):
    code, out, _ = call(capsys, "consistency", "--builtin", "paper-a", "--n", "2")
    assert code == 0 and json.loads(out)["ok"] is True


def test_model_failure_exit_one(capsys):
    code, out, err = call(capsys, "check", "--k", "t")
    assert code == 1 and out == "" and "symmetric" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["eigen", "--k", "2*(t", "--r", "1"],
        ["eigen", "--builtin", "sphere"],
        ["closing-length"],
        ["closing-length", "--k", "1", "--builtin", "flat"],
        ["closing-length", "--k", "1", "--tol", "1e-2"],
        ["eigen", "--builtin", "sphere", "--r", "4"],
        ["nonsense"],
        ["sweep", "--builtin", "sphere", "--min", "1", "--max", "2", "--count", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_numerical_failure_exit_three(capsys):
    code, out, err = call(capsys, "warp", "--k", "1/(t-1)", "--t-max", "2")
    assert code == 3 and out == "" and err


def test_sweep_rows_and_header(capsys):
    code, out, _ = call(capsys, "sweep", "--builtin", "paper-a", "--n", "3", "--min", "1", "--max", "2.9",
                        "--count", "5", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["r", "lambda"] and len(rows) == 6
    lams = [float(r[1]) for r in rows[1:]]
    assert lams == sorted(lams, reverse=True)


def test_sweep_K(capsys):
    code, out, _ = call(capsys, "sweep", "--param", "K", "--min", "0.25", "--max", "4", "--count", "3",
                        "--n", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    for row in rows:
        assert float(row["lambda_plus"]) == pytest.approx(float(row["nK"]), rel=1e-6)


def test_explore_question(capsys):
    code, out, _ = call(capsys, "explore-question", "--builtin", "sphere", "--n", "3")
    data = json.loads(out)
    assert code == 0 and data["n_k_min"] == 3.0
    assert data["lambda1_closed"] == pytest.approx(3.0, rel=1e-6)


def test_profile_file_and_out(capsys, tmp_path):
    src = tmp_path / "k.txt"
    src.write_text("12/(80-(t-4)^2)")
    dest = tmp_path / "out.json"
    code, out, _ = call(capsys, "closing-length", "--profile", str(src), "--out", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["l"] == pytest.approx(8.0, abs=1e-8)


def test_eigen_flat_csv(capsys):
    code, out, _ = call(capsys, "eigen", "--builtin", "flat", "--n", "2", "--r", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["t", "phi"]
    assert float(rows[1][1]) == 1.0


def test_pretty_output(capsys):
    code, out, _ = call(capsys, "closing-length", "--builtin", "sphere", "--format", "pretty")
    assert code == 0 and "closes: True" in out


def test_json_floats_have_17_digits(capsys):
    _, out, _ = call(capsys, "closing-length", "--builtin", "sphere")
    assert '"l": 3.1415926535897927' in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "warped_spectra", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "closing-length" in proc.stdout

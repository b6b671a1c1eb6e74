import json
import math

import pytest

from qubitfield.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def data_rows(csv_text):
    lines = csv_text.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "trial_id,protocol,i_index,I_true,I_est,abs_error"
    return [line.split(",") for line in lines[2:]]


def test_simulate_method_ii_pi(capsys):
    code, out, _ = run(capsys, "simulate", "--protocol", "method-ii", "--target-i", "3.141592653589793",
                       "--n-qubits", "30", "--m-scale", "5", "--trials", "1", "--seed", "7")
    assert code == 0
    (row,) = data_rows(out)
    assert abs(float(row[4]) - math.pi) <= 10 * 50 / 2**30


def test_simulate_classical_zero(capsys):
    code, out, _ = run(capsys, "simulate", "--protocol", "classical", "--target-i", "0", "--trials", "5")
    assert code == 0
    assert all(float(r[4]) == 0.0 for r in data_rows(out))


def test_simulate_missing_target_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--protocol", "classical"])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--protocol", "method-ii", "--target-i", "1", "--alpha", "1e-3", "--m-scale", "5"],
        ["simulate", "--protocol", "method-ii", "--target-i", "1", "--alpha", "1e-3", "--guard", "4"],
        ["simulate", "--protocol", "combined", "--target-i", "1"],
        ["simulate", "--protocol", "classical", "--target-i", "1", "--bogus"],
        ["simulate", "--protocol", "classical", "--target-i", "1", "--seed", "-3"],
        ["table1", "--format", "csv"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_runtime_errors_exit_1(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--protocol", "method-ii", "--target-i", "1", "--alpha", "1e-20")
    assert code == 1 and "2**-46" in err
    field = tmp_path / "neg.txt"
    field.write_text("kind = grid\nsamples = 1, -2, 1\ndx = 1\n")
    code, _, err = run(capsys, "simulate", "--protocol", "classical", "--field", str(field))
    assert code == 1 and "non-negative" in err


def test_field_document_input(capsys, tmp_path):
    field = tmp_path / "f.txt"
    field.write_text("kind = constant\namplitude = 2\nlength = 1.5\n")
    code, out, _ = run(capsys, "simulate", "--protocol", "method-ii", "--field", str(field), "--trials", "3")
    assert code == 0
    assert all(float(r[3]) == 3.0 for r in data_rows(out))


def test_simulate_files_are_byte_identical(tmp_path, capsys):
    paths = []
    for workers, name in ((1, "a.csv"), (4, "b.csv")):
        p = tmp_path / name
        assert main(["simulate", "--protocol", "combined", "--n0", "6", "--target-i", "1.5", "4.2",
                     "--trials", "500", "--seed", "0xBEEF", "--workers", str(workers), "--out", str(p)]) == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert '"seed": 48879' in paths[0].read_text().splitlines()[0]


def test_simulate_json(capsys):
    code, out, _ = run(capsys, "simulate", "--protocol", "counter", "--target-i", "5", "--trials", "20",
                       "--format", "json", "--n-bits", "24")
    doc = json.loads(out)
    assert code == 0 and doc["seed"] == 0 and doc["spec"]["config"]["n_bits"] == 24


def test_table1_text(capsys):
    code, out, _ = run(capsys, "table1", "--seed", "11")
    assert code == 0
    rows = [line.split("|") for line in out.splitlines() if line[:3].strip().isdigit()]
    assert len(rows) == 10
    assert rows[2][1].strip() == "9.424777961"
    agree = sum(abs(float(r[2]) - float(r[1])) < 5e-7 for r in rows)
    assert agree >= 9
    assert "seed=11" in out
    code2, out2, _ = run(capsys, "table1", "--seed", "11")
    assert out2 == out


def test_table1_json(capsys):
    code, out, _ = run(capsys, "table1", "--format", "json")
    doc = json.loads(out)
    assert doc["seed"] == 0 and len(doc["rows"]) == 10


def test_error_profile(capsys):
    code, out, _ = run(capsys, "error-profile", "--format", "json")
    doc = json.loads(out)
    profile = {p["delta_over_alpha"]: p["probability"] for p in doc["profile"]}
    assert profile[0.0] == 1.0 and profile[1.0] < 1e-12
    tail10 = doc["tail"][9]
    assert tail10["threshold"] == 10
    assert tail10["published_range"] == pytest.approx(0.020451, abs=1e-6)
    code, out, _ = run(capsys, "error-profile", "--max-n-alpha", "2")
    assert code == 0 and "symmetric" in out


def test_optimize_lambda(capsys):
    code, out, _ = run(capsys, "optimize-lambda", "--format", "json")
    doc = json.loads(out)
    assert doc["lambda_opt_times_m"] == pytest.approx(1.5936, abs=1e-3)
    assert doc["uncertainty_conventional"] / doc["uncertainty_opt"] < 1.05
    assert "1.2" in doc["discrepancy"]
    _, out_n, _ = run(capsys, "optimize-lambda", "--format", "json", "--n-bits", "500")
    assert json.loads(out_n)["lambda_opt"] == doc["lambda_opt"]
    code, text, _ = run(capsys, "optimize-lambda")
    assert "note:" in text

import csv
import json
from pathlib import Path

import jsonschema
import pytest

from spectral_var import bounds
from spectral_var.cli import main
from spectral_var.constants import UNIT


SCHEMA = json.loads((Path(__file__).resolve().parent.parent / "schemas" / "report.schema.json").read_text())


@pytest.fixture
def remark_files(data_dir):
    return str(data_dir / "remark1_a.json"), str(data_dir / "remark1_b.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def validated(text, definition=None):
    document = json.loads(text)
    jsonschema.validate(document, SCHEMA)
    if definition is not None:
        jsonschema.validate(document["payload"], {"$ref": f"#/$defs/{definition}", "$defs": SCHEMA["$defs"]})
    return document


def test_check_corollary_holds(capsys, remark_files):
    a, b = remark_files
    code, out, err = run(capsys, "check", "--a", a, "--b", b, "--p", "2", "--bound", "corollary")
    assert code == 0
    assert "✅" in err
    document = validated(out, "bound_report")
    assert document["check"] == "corollary"
    assert document["inputs"]["a"]["digest"].startswith("sha256:")
    assert document["payload"]["lhs"] == pytest.approx(2.0)
    assert document["payload"]["rhs"] == pytest.approx(2.0)


def test_check_main_theorem_equality_case(capsys, data_dir):
    a, b = str(data_dir / "remark1_a.json"), str(data_dir / "main1_b1.json")
    code, out, _ = run(capsys, "check", "--a", a, "--b", b, "--p", "2", "--bound", "main")
    assert code == 0
    payload = validated(out, "bound_report")["payload"]
    assert payload["lhs"] == pytest.approx(6.0)
    assert payload["rhs"] == pytest.approx(6.0)
    assert payload["details"]["imag_weight"] == 2.0


def test_check_payload_is_deterministic(capsys, remark_files):
    a, b = remark_files
    argv = ("check", "--a", a, "--b", b, "--p", "3", "--bound", "main")
    first = json.loads(run(capsys, *argv)[1])
    second = json.loads(run(capsys, *argv)[1])
    del first["timestamp"]
    del second["timestamp"]
    assert first == second


def test_check_reads_matrix_market(capsys, data_dir):
    a = str(data_dir / "remark1_a.json")
    code, out, _ = run(capsys, "check", "--a", a, "--b", str(data_dir / "remark1_b.mtx"), "--p", "2", "--bound", "interval")
    assert code == 0
    assert validated(out, "bound_report")["payload"]["details"]["interval"] == pytest.approx([-1.0, 1.0])


def test_check_writes_out_file(capsys, tmp_path, remark_files):
    a, b = remark_files
    target = tmp_path / "reports" / "numrange.json"
    code, out, _ = run(capsys, "check", "--a", a, "--b", b, "--p", "2", "--bound", "numrange", "--angles", "64", "--out", str(target))
    assert code == 0
    assert out == ""
    assert validated(target.read_text(), "bound_report")["payload"]["details"]["angle_count"] == 64


def test_check_errors_exit_one(capsys, remark_files):
    a, b = remark_files
    code, _, err = run(capsys, "check", "--a", a, "--b", b, "--p", "0.5", "--bound", "corollary")
    assert code == 1
    assert "ParameterError" in err

    code, _, err = run(capsys, "check", "--a", a, "--b", b, "--p", "2", "--bound", "kato")
    assert code == 1
    assert "StructureError" in err

    code, _, err = run(capsys, "check", "--a", a, "--b", "missing.json", "--p", "2", "--bound", "kato")
    assert code == 1
    assert "MatrixFileError" in err


def test_numrange_rejects_zero_angles(capsys, remark_files):
    a, b = remark_files
    code, out, err = run(capsys, "check", "--a", a, "--b", b, "--p", "2", "--bound", "numrange", "--angles", "0")
    assert code == 1
    assert out == ""
    assert "angle_count" in err


def test_violation_exits_two(capsys, monkeypatch, remark_files):
    monkeypatch.setattr(bounds, "check_corollary", lambda *args: bounds.make_report("corollary", 3.0, 2.0, UNIT))
    a, b = remark_files
    code, out, err = run(capsys, "check", "--a", a, "--b", b, "--p", "2", "--bound", "corollary")
    assert code == 2
    assert "❌" in err
    assert validated(out, "bound_report")["payload"]["holds"] is False


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "check", "--bogus")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1


def test_chain(capsys, remark_files):
    a, b = remark_files
    code, out, err = run(capsys, "chain", "--a", a, "--b", b, "--p", "2")
    assert code == 0
    payload = validated(out, "chain_report")["payload"]
    assert len(payload["steps"]) == 8
    assert payload["holds"] is True
    assert "final" in err

    code, _, _ = run(capsys, "chain", "--a", a, "--b", b, "--p", "2", "--select", "0")
    assert code == 0
    code, _, err = run(capsys, "chain", "--a", a, "--b", b, "--p", "2", "--select", "5")
    assert code == 1
    code, _, _ = run(capsys, "chain", "--a", a, "--b", b, "--p", "2", "--select", "0,x")
    assert code == 1


def test_sweep_csv_is_reproducible(capsys, tmp_path):
    argv = ("sweep", "--dim", "3", "--p", "2", "--trials", "3", "--seed", "42")
    code, out, _ = run(capsys, *argv, "--csv", str(tmp_path / "one.csv"))
    assert code == 0
    run(capsys, *argv, "--csv", str(tmp_path / "two.csv"))

    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "two.csv").read_bytes()
    with open(tmp_path / "one.csv", newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["trial", "p", "dim", "check_name", "lhs", "rhs", "slack", "holds", "ratio"]
    assert {row[7] for row in rows[1:]} == {"true"}

    footer = validated((tmp_path / "one.summary.json").read_text())
    assert footer["payload"] == validated(out)["payload"]
    assert footer["payload"]["violations"] == 0


def test_sweep_rejects_zero_trials(capsys):
    code, _, err = run(capsys, "sweep", "--dim", "3", "--p", "2", "--trials", "0", "--seed", "1")
    assert code == 1
    assert "trials" in err


@pytest.mark.parametrize("p, c_p", [("2", 2.0), ("4", None)])
def test_constants(capsys, p, c_p):
    code, out, err = run(capsys, "constants", "--p", p)
    assert code == 0
    constants = validated(out)["payload"]["constants"]
    for entry in constants.values():
        jsonschema.validate(entry, SCHEMA["$defs"]["constant"])
    assert set(constants) == {"b_p", "Gamma_p", "L_p", "M_p", "N_p", "C_p"}
    if c_p is not None:
        assert constants["C_p"]["value"] == pytest.approx(c_p)
    assert constants["b_p"]["exact"] is True
    assert "C_p" in err


def test_constants_at_p_one(capsys):
    code, out, _ = run(capsys, "constants", "--p", "1")
    assert code == 0
    constants = validated(out)["payload"]["constants"]
    assert constants["b_p"] == "unsupported (p>1 required)"
    assert constants["N_p"]["value"] == pytest.approx(3.0)
    assert run(capsys, "constants", "--p", "0.5")[0] == 1


def test_sharpness_writes_trace(capsys, tmp_path):
    target = tmp_path / "sharp.json"
    code, out, _ = run(
        capsys, "sharpness", "--p", "2", "--dim", "2", "--iters", "1", "--restarts", "3", "--seed", "3",
        "--out", str(target),
    )
    assert code == 0
    assert out == ""
    payload = validated(target.read_text())["payload"]
    assert payload["evaluations"] == 3
    assert payload["exceeds_constant"] is False
    with open(tmp_path / "sharp.trace.csv", newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["evaluation", "restart", "best_ratio"]
    assert [row[1] for row in rows[1:]] == ["0", "1", "2"]

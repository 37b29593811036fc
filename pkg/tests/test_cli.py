import json

import pytest

import fairkit.audit.report as report_module
from fairkit.main import main


def test_selftest_finds_no_violations(capsys):
    assert main(["selftest", "--trials", "1000", "--seed", "42"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["fuzz"]["violations"] == 0
    assert report["fuzz"]["trials"] == 1000
    assert all(report["perfect"]["passes"].values())


def test_selftest_sweep(capsys):
    assert main(["selftest", "--trials", "10", "--sweep"]) == 0
    sweep = json.loads(capsys.readouterr().out)["sweep"]
    assert [point["scale"] for point in sweep] == [1.0, 0.5, 0.25, 0.1, 0.01]


def test_audit_fixture_markdown(capsys):
    assert main(["audit", "--fixture", "compas", "--format", "markdown"]) == 0
    out = capsys.readouterr().out
    assert "1.1436" in out and "0.8841" in out
    assert "Black vs White" in out


def test_audit_writes_report_file(tmp_path):
    out = tmp_path / "report.json"
    assert main(["audit", "--fixture", "compas", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["meta"]["source"] == "fixture:compas"


@pytest.mark.parametrize("argv", [["audit", "--fixture", "compas", "--bogus"], []])
def test_usage_errors_exit_1(capsys, argv):
    assert main(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "selftest" in capsys.readouterr().out


def test_missing_input_file(tmp_path, capsys):
    assert main(["audit", "--input", str(tmp_path / "absent.csv")]) == 1
    assert "FileError" in capsys.readouterr().err


def test_bad_tolerance_is_a_usage_error():
    assert main(["audit", "--fixture", "compas", "--tolerance", "-1"]) == 1


def test_generate_then_audit(tmp_path, capsys):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["generate", "--n", "200", "--seed", "3", "--out", str(first)]) == 0
    assert main(["generate", "--n", "200", "--seed", "3", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()

    assert main(["audit", "--input", str(first)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert [g["group"] for g in report["groups"]] == ["A", "B"]
    assert report["meta"]["source"] == str(first)


def test_generate_to_stdout(capsys):
    assert main(["generate", "--n", "5", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "group,y,pred,score"
    assert len(lines) == 11


def test_equalize_calibration(capsys):
    assert main(["equalize", "--demo", "--target", "calibration", "--seed", "7"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["single"]["target"] == "calibration"
    assert report["meta"]["seed"] == 7
    assert sorted(report["evaluated"]) == ["A", "B"]


def test_equalize_odds_max_accuracy(capsys):
    assert main(["equalize", "--demo", "--odds", "max_accuracy"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["odds"]["objective"] == "max_accuracy"
    assert report["single"] is None


def test_equalize_unknown_reference(capsys):
    assert main(["equalize", "--demo", "--target", "tpr", "--ref-group", "Z"]) == 1
    assert "DomainError" in capsys.readouterr().err


def test_tripwire_exits_2_and_logs_the_pair(monkeypatch, capsys):
    real_check_pair = report_module.check_pair

    def firing_check_pair(a, b, tol=None):
        return real_check_pair(a, b, tol).model_copy(update={"theorem_violated": True})

    monkeypatch.setattr(report_module, "check_pair", firing_check_pair)
    assert main(["audit", "--fixture", "compas"]) == 2
    captured = capsys.readouterr()
    assert json.loads(captured.out)["pairs"][0]["theorem_violated"] is True
    assert "TheoremViolation" in captured.err
    assert "Tripwire fired for Black vs White" in captured.err
    assert "component_gaps" in captured.err

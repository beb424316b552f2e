import json
import subprocess
import sys

import pytest

from ihoml.cli import main
from ihoml.report import CONSISTENCY, report_from_json, reverify, run_check
from ihoml.search import Bounds


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_model(tmp_path, data, name="model.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


ONE_WORLD = {"worlds": 1, "entities": 1, "accessibility": [[0, 0]], "existsAt": [[0, 0]], "interp": {}}


def test_check_anderson_mc_expect(capsys):
    code, out, _ = run(capsys, "check", "--variant", "anderson", "--logic", "KB", "--goal", "MC",
                       "--max-worlds", "2", "--max-entities", "1", "--strategy", "exhaustive", "--expect")
    assert code == 0
    assert "Countermodel" in out and "2 worlds, 1 entities" in out


def test_check_scott_u3_expect(capsys):
    code, out, _ = run(capsys, "check", "--variant", "scott", "--goal", "U3", "--max-worlds", "2",
                       "--max-entities", "1", "--strategy", "exhaustive", "--expect")
    assert code == 0
    assert "ValidWithinBounds" in out


def test_check_expect_reports_mismatch(capsys):
    # bounds too small to see the countermodel
    code, _, err = run(capsys, "check", "--variant", "anderson", "--goal", "MC", "--max-worlds", "1",
                       "--max-entities", "1", "--strategy", "exhaustive", "--expect")
    assert code == 1
    assert "mismatch MC" in err


def test_json_report_roundtrip(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", "--variant", "anderson", "--goal", "MC", "--goal", "U1", "--goal", "T6",
                       "--goal", "consistency", "--max-worlds", "2", "--max-entities", "1", "--format", "json",
                       "--deterministic", "--output", str(out_file))
    assert code == 0
    data = json.loads(out)
    assert json.loads(out_file.read_text()) == data
    assert "timings" not in data
    rep = report_from_json(data)
    reverify(rep)
    assert rep.dumps(True) == out.rstrip("\n")


def test_reverify_detects_tampering(capsys):
    _, out, _ = run(capsys, "check", "--variant", "anderson", "--goal", "MC", "--max-worlds", "2",
                    "--max-entities", "1", "--format", "json", "--deterministic")
    data = json.loads(out)
    data["verdicts"]["MC"]["model"]["accessibility"] = [[0, 0], [1, 1]]
    with pytest.raises(AssertionError):
        reverify(report_from_json(data))


def test_scott_postulated_a3_report_reverifies():
    # A3 quantifies over g => s, which is past the carrier cap at 2x2
    bounds = Bounds(dims=((2, 2),), strategy="randomized", budget=100_000)
    rep = run_check("scott", [CONSISTENCY], "KB", bounds)
    v = rep.verdicts[CONSISTENCY]
    assert v.tag == "ConsistencyWitness"
    assert v.stats["axiom_modes"] == {"A3@2x2": "replaced by postulated T2"}
    reverify(report_from_json(json.loads(rep.dumps(True))))


def test_eval_box_false_on_one_world(capsys, tmp_path):
    path = write_model(tmp_path, ONE_WORLD)
    code, out, _ = run(capsys, "eval", "--model", path, "--formula", "box mfalse")
    assert code == 0
    assert "w0  false" in out and "valid: false" in out


def test_eval_dead_end_box_true(capsys, tmp_path):
    path = write_model(tmp_path, dict(ONE_WORLD, accessibility=[]))
    code, out, _ = run(capsys, "eval", "--model", path, "--formula", "box mfalse")
    assert code == 0
    assert "w0  true" in out


def test_scott_witness_satisfies_t6(capsys, tmp_path):
    _, out, _ = run(capsys, "check", "--variant", "scott", "--goal", "consistency", "--max-worlds", "1",
                    "--max-entities", "1", "--format", "json", "--deterministic")
    model = json.loads(out)["verdicts"]["consistency"]["model"]
    path = write_model(tmp_path, model)
    code, out, _ = run(capsys, "eval", "--model", path, "--variant", "scott", "--logic", "KB",
                       "--formula", "valid[box existsE G]")
    assert code == 0
    assert "value: true" in out


def test_eval_ill_typed_formula(capsys, tmp_path):
    path = write_model(tmp_path, ONE_WORLD)
    code, _, err = run(capsys, "eval", "--model", path, "--formula", "box (\\x:e. mtrue)")
    assert code == 2
    assert "TypeCheckError" in err and "column" in err


def test_eval_model_violating_logic(capsys, tmp_path):
    path = write_model(tmp_path, dict(ONE_WORLD, accessibility=[]))
    code, _, err = run(capsys, "eval", "--model", path, "--logic", "S5", "--formula", "mtrue")
    assert code == 2
    assert err.startswith("error:")


def test_unknown_goal_is_usage_error(capsys):
    code, _, err = run(capsys, "check", "--variant", "fitting", "--goal", "U3")
    assert code == 2
    assert "U3" in err


def test_bad_arguments_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["check", "--variant", "scott", "--max-worlds", "0"])
    assert exc.value.code == 2


def test_exhaustive_over_budget_is_inconclusive(capsys):
    code, _, err = run(capsys, "check", "--variant", "anderson", "--goal", "MC", "--max-worlds", "2",
                       "--max-entities", "1", "--strategy", "exhaustive", "--budget", "10")
    assert code == 3
    assert err.startswith("inconclusive")


def test_suite_core(capsys):
    code, out, _ = run(capsys, "suite", "--variant", "core", "--format", "json", "--deterministic")
    assert code == 0
    data = json.loads(out)
    assert not data["mismatches"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ihoml", "check", "--variant", "fitting", "--goal", "consistency",
                           "--max-worlds", "1", "--max-entities", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "ConsistencyWitness" in proc.stdout


def test_check_fitting_u1_expect(capsys):
    code, out, _ = run(capsys, "check", "--variant", "fitting", "--goal", "U1", "--max-worlds", "2",
                       "--max-entities", "2", "--expect")
    assert code == 0
    assert "ValidWithinBounds" in out

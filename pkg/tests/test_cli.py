import json
import subprocess
import sys

import pytest

from catq.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_quantify_worked_example(capsys, fixtures):
    assert run(capsys, "quantify", "--op", "forall", "--model", "set", "--in", fixtures / "phi.json") == (0, "{1}\n", "")
    code, out, _ = run(capsys, "quantify", "--op", "exists", "--in", fixtures / "phi.json")
    assert (code, out) == (0, "{1}\n")


def test_quantify_slice(capsys, fixtures):
    code, out, _ = run(capsys, "quantify", "--op", "forall", "--model", "slice", fixtures / "phi.json")
    assert (code, out) == (0, "{1}\n")
    # x, z chosen over 0 <- {x, y}, 1 <- {z}
    code, out, _ = run(capsys, "quantify", "--op", "forall", "--model", "slice", fixtures / "slice_map.json")
    assert (code, out) == (0, "{1}\n")
    code, out, _ = run(capsys, "quantify", "--op", "exists", "--model", "slice", "--format", "json", fixtures / "slice_map.json")
    assert code == 0 and json.loads(out)["result"] == [0, 1]


def test_check_category_outcomes(capsys, fixtures):
    code, out, _ = run(capsys, "check", "category", fixtures / "empty.json")
    assert code == 0 and out.startswith("category: pass")
    code, _, err = run(capsys, "check", "category", fixtures / "missing_compose.json")
    assert code == 2 and "ValidationError" in err and "('id1', 'u')" in err
    code, _, err = run(capsys, "check", "category", fixtures / "broken.json")
    assert code == 2 and "ParseError" in err
    code, out, _ = run(capsys, "check", "category", fixtures / "nonassoc.json")
    assert code == 1 and "fail" in out


@pytest.mark.parametrize(
    "what, name", [("functor", "collapse.json"), ("natural", "idnat.json"), ("adjunction", "adj.json")]
)
def test_check_models_pass(capsys, fixtures, what, name):
    code, out, _ = run(capsys, "check", what, "--in", fixtures / name)
    assert code == 0, out


def test_beck_chevalley_files(capsys, fixtures):
    code, _, _ = run(capsys, "check", "beck-chevalley", "--square", fixtures / "pullback.json")
    assert code == 0
    code, out, _ = run(capsys, "check", "beck-chevalley", "--square", fixtures / "not_pullback.json", "--format", "json")
    doc = json.loads(out)
    assert code == 1
    (rep,) = doc["reports"]
    assert rep["status"] == "fail"
    assert rep["witnesses"][0]["law"] == "pullback" and "NotAPullback" in rep["witnesses"][0]["detail"]


def test_kan_groth_pseudolimit(capsys, fixtures):
    code, out, _ = run(capsys, "kan", fixtures / "kan_arrow.json")
    assert code == 0 and "kan-adjunctions: pass" in out
    code, out, _ = run(capsys, "groth", "build", fixtures / "indexed.json", "--format", "json")
    assert code == 0 and {r["suite"] for r in json.loads(out)["reports"]} == {
        "indexed-model",
        "total",
        "cartesian-lifts",
        "fiber-recovery",
    }
    code, out, _ = run(capsys, "pseudolimit", fixtures / "diagram.json")
    assert code == 0 and "universal: pass" in out


def test_json_schema_and_determinism(capsys):
    argv = ("check", "suite", "--suite", "core,interchange,strictify", "--format", "json", "--seed", "3")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    doc = json.loads(first)
    assert doc["schema"] == 1
    assert [r["suite"] for r in doc["reports"]] == ["core", "interchange", "strictify"]
    for r in doc["reports"]:
        assert r["status"] == "pass" and r["witnesses"] == [] and "duration_ms" not in r


def test_timings_flag(capsys):
    _, out, _ = run(capsys, "check", "suite", "--suite", "core", "--format", "json", "--timings")
    assert "duration_ms" in json.loads(out)["reports"][0]


def test_bad_arguments(capsys, fixtures):
    assert run(capsys, "check", "suite", "--suite", "nosuch")[0] == 2
    assert run(capsys, "check", "suite", "--suite", "core", "--cap", "core=0")[0] == 2
    assert run(capsys, "check", "suite", "--cap", "core")[0] == 2
    assert run(capsys, "check", "category")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_module_entry_point(fixtures):
    proc = subprocess.run(
        [sys.executable, "-m", "catq", "quantify", "--op", "forall", "--in", str(fixtures / "phi.json")],
        capture_output=True,
        text=True,
    )
    assert (proc.returncode, proc.stdout) == (0, "{1}\n")

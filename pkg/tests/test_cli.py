import json

import pytest

from atfkit.atbd import dumps, loads, validate
from atfkit.catalog import build
from atfkit.cli import main


@pytest.fixture
def cp2_file(tmp_path):
    p = tmp_path / "cp2.json"
    p.write_text(dumps(build("cp2")))
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_markov_classify(capsys):
    code, out = run(capsys, "markov", "classify")
    assert code == 0
    assert out.out.splitlines()[-1] == "per degree: 9:1 8:1 7:0 6:1 5:1 4:1 3:2 2:2 1:2 total 11"


def test_markov_tree(capsys):
    code, out = run(capsys, "markov", "tree", "--eq", "II:3,1,1,1", "--bound", "40")
    assert out.out.split() == ["1,1,1", "1,1,2", "1,2,5", "1,5,13", "2,5,29", "1,13,34"]


def test_markov_mutate_and_minimize(capsys):
    assert run(capsys, "markov", "mutate", "--eq", "I:2,2,4,4", "--triple", "2,1,1", "--index", "2")[1].out == "2,3,1\n"
    assert run(capsys, "markov", "minimize", "--eq", "II:3,1,1,1", "--triple", "2,5,29")[1].out.startswith("1,1,1 ")


def test_markov_usage_errors(capsys):
    assert run(capsys, "markov", "solve")[0] == 2
    assert run(capsys, "markov", "solve", "--eq", "I:7,1,1,3")[0] == 2
    assert run(capsys, "markov", "mutate", "--eq", "II:3,1,1,1", "--triple", "1,1")[0] == 2


def test_markov_non_solution_fails(capsys):
    assert run(capsys, "markov", "minimize", "--eq", "II:3,1,1,1", "--triple", "1,1,3")[0] == 1


def test_argparse_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["atbd", "explode", "x"])
    assert exc.value.code == 2


def test_atbd_validate_and_ops(capsys, cp2_file, tmp_path):
    assert run(capsys, "atbd", "validate", cp2_file) == (0, run(capsys, "atbd", "validate", cp2_file)[1])
    out = tmp_path / "m.json"
    assert run(capsys, "atbd", "mutate", cp2_file, "--cut", "0", "-o", out)[0] == 0
    assert validate(loads(out.read_text())).ok
    code, res = run(capsys, "atbd", "profile", out)
    assert code == 0 and "node type:   (1,2) (1,1) (1,1)" in res.out
    assert run(capsys, "atbd", "canon", out)[0] == 0


def test_atbd_invalid_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"vertices": [[0, 0], [1, 1], [2, 2]]}))
    code, res = run(capsys, "atbd", "validate", p)
    assert code == 1 and res.out.strip().endswith("invalid")
    assert run(capsys, "atbd", "validate", tmp_path / "missing.json")[0] == 2


def test_atbd_precondition_failure(capsys, cp2_file):
    # the monotone point sits on every cut of a monotone diagram
    code, res = run(capsys, "atbd", "transfer", cp2_file, "--cut", "0")
    assert code == 1 and "monotone point" in res.err


def test_atbd_blowups(capsys, tmp_path):
    base = tmp_path / "base.json"
    base.write_text(dumps(build("cp2", 1)))
    code, res = run(capsys, "atbd", "blowup", base, "--vertex", "0")
    assert code == 0 and len(loads(res.out)) == 4
    code, res = run(capsys, "atbd", "atblowup", base, "--point", "1/2,-1", "--length", "1/2")
    assert code == 0 and loads(res.out).cuts[0].kind.value == "seam"
    assert run(capsys, "atbd", "blowup", base)[0] == 2


def test_catalog_build_and_list(capsys):
    code, res = run(capsys, "catalog", "build", "--id", "cp2x1.family", "--params", "2,5")
    assert code == 0 and loads(res.out).label == "cp2x1.family[2,5]:3"
    assert run(capsys, "catalog", "build", "--id", "cp2x1.family")[0] == 2
    assert run(capsys, "catalog", "build", "--id", "nope")[0] == 2
    code, res = run(capsys, "catalog", "list")
    assert code == 0 and "cp2x3.A" in res.out


def test_catalog_verify_exit_codes(capsys):
    code, res = run(capsys, "catalog", "verify", "--id", "cp2x6.C")
    assert code == 0 and res.out.endswith("0 failed\n")
    code, res = run(capsys, "catalog", "verify")
    assert code == 1 and res.out.endswith("5 failed\n")


def test_orbifold_tables(capsys, cp2_file):
    assert run(capsys, "orbifold", "degree", cp2_file)[1].out == "9\n"
    code, res = run(capsys, "orbifold", "matrix", cp2_file)
    assert res.out.split() == ["1"] * 9
    code, res = run(capsys, "orbifold", "hull", cp2_file)
    assert code == 0 and res.out.splitlines()[0].split() == ["x", "y", "edge"]
    assert run(capsys, "orbifold", "limit", cp2_file)[0] == 0


def test_render(capsys, cp2_file, tmp_path):
    out = tmp_path / "cp2.svg"
    assert run(capsys, "render", cp2_file, "-o", out, "--grid", "--labels", "--scale", "20")[0] == 0
    assert out.read_text().startswith("<svg")
    assert run(capsys, "render", cp2_file, "--scale", "0")[0] == 2


def test_verify(capsys):
    code, res = run(capsys, "verify", "--suite", "classification")
    assert code == 0 and res.out.startswith("suite classification: pass")
    assert run(capsys, "verify", "--suite", "classification", "--depth", "17")[0] == 2
    assert run(capsys, "verify", "--suite", "nope")[0] == 2


def test_golden_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("ATFKIT_GOLDEN_DIR", str(tmp_path))
    code, res = run(capsys, "catalog", "verify", "--id", "cp2")
    assert code == 1 and "missing" in res.out

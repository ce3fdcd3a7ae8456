import json
import subprocess
import sys

import pytest

from aeplan.cli import parse_letters, run


@pytest.fixture
def files(tmp_path):
    paths = {
        "bintree": tmp_path / "bintree.dom",
        "only": tmp_path / "only.plan",
        "blocks": tmp_path / "blocks.dom",
    }
    assert run(["gen", "bintree", "--out", str(paths["bintree"]), "--plan-out", str(paths["only"])]) == 0
    assert run(["gen", "blocks", "--out", str(paths["blocks"])]) == 0
    return paths


def test_normalize(capsys):
    assert run(["normalize", "AEAE"]) == 0
    assert capsys.readouterr().out == "AE\n"


def test_normalize_json(capsys):
    assert run(["normalize", "A(EA)^w", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["canonical"] == "(AE)^w"


def test_implies_exit_codes(capsys):
    assert run(["implies", "AEA", "EA"]) == 0
    assert run(["implies", "AE", "EA"]) == 1


def test_eval(capsys):
    assert run(["eval", "GF p", "--loop", "{p} {}"]) == 0
    assert run(["eval", "FG p", "--loop", "{p} {}"]) == 1
    assert run(["eval", "X p", "--stem", "{p}", "--loop", "{}"]) == 1
    assert parse_letters("{p,q} {}") == [frozenset({"p", "q"}), frozenset()]


def test_check_binary_tree(files, capsys):
    argv = ["check", "--domain", str(files["bintree"]), "--plan", str(files["only"])]
    assert run(argv + ["--goal", "E . G !q"]) == 0
    assert capsys.readouterr().out.startswith("true")
    assert run(argv + ["--goal", "A . F p", "--json"]) == 1
    assert json.loads(capsys.readouterr().out)["verdict"] is False


def test_synth_unsatisfiable(files, capsys):
    assert run(["synth", "--domain", str(files["blocks"]), "--goal", "AEA . F G tower"]) == 1
    assert capsys.readouterr().out.strip() == "unsatisfiable"


def test_synth_then_check(files, tmp_path, capsys):
    plan = tmp_path / "out.plan"
    game = tmp_path / "game.txt"
    goal = "AE . G F tower"
    argv = ["synth", "--domain", str(files["blocks"]), "--goal", goal, "--out", str(plan)]
    assert run(argv + ["--emit-game", str(game), "--json"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["solvable"] and summary["plan_file"] == str(plan)
    assert game.read_text().startswith(f"game nodes={summary['game_nodes']}")
    assert run(["check", "--domain", str(files["blocks"]), "--plan", str(plan), "--goal", goal]) == 0


def test_memory_cap(files, capsys):
    argv = ["synth", "--domain", str(files["blocks"]), "--goal", "AE . G F tower"]
    assert run(argv + ["--memory-cap", "10"]) == 2
    assert "exceeds" in capsys.readouterr().err


def test_usage_errors(files, capsys):
    assert run(["normalize", "AXE"]) == 2
    assert run(["check", "--domain", "/nonexistent", "--plan", "x", "--goal", "E . p"]) == 2
    assert run(["check", "--domain", str(files["bintree"]), "--plan", str(files["only"]), "--goal", "E . F r"]) == 2
    assert run(["gen", "realizability"]) == 2
    assert run(["bogus"]) == 2
    err = capsys.readouterr().err
    assert "aeplan" in err


def test_gen_random_is_seeded(tmp_path, capsys):
    assert run(["gen", "random", "--seed", "5"]) == 0
    first = capsys.readouterr().out
    assert run(["gen", "random", "--seed", "5"]) == 0
    assert capsys.readouterr().out == first


def test_output_is_deterministic(files):
    cmd = [sys.executable, "-m", "aeplan", "synth", "--domain", str(files["blocks"]), "--goal", "AE . F G tower"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"memory:")

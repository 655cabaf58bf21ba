"""
Тесты командной строки: подкоманды, файлы, коды выхода
"""
import json

import pytest

from parity_complement.main import run_cli


def _loop_file(directory, priority: int) -> str:
    path = directory / f"loop{priority}.json"
    path.write_text(json.dumps({
        "kind": "parity",
        "states": ["q"],
        "initial": ["q"],
        "alphabet": ["a"],
        "transitions": [{"from": "q", "letter": "a", "to": "q", "priority": priority}],
    }), encoding="utf-8")
    return str(path)


def test_complement_then_empty(tmp_path, capsys):
    source = _loop_file(tmp_path, 2)
    target = str(tmp_path / "out" / "complement.json")
    assert run_cli(["complement", source, "-o", target]) == 0
    out = capsys.readouterr().out
    assert "phase1: 1" in out
    assert "phase2: 1" in out

    assert run_cli(["empty", target]) == 0
    assert capsys.readouterr().out.strip() == "empty"


def test_empty_prints_witness(tmp_path, capsys):
    source = _loop_file(tmp_path, 1)
    target = str(tmp_path / "complement.json")
    assert run_cli(["complement", source, "-o", target]) == 0
    capsys.readouterr()
    assert run_cli(["empty", target]) == 0
    witness = json.loads(capsys.readouterr().out)
    assert set(witness["period"]) == {"a"}


def test_member(tmp_path, capsys):
    source = _loop_file(tmp_path, 2)
    assert run_cli(["member", source, "--period", "a"]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert run_cli(["member", _loop_file(tmp_path, 1), "--prefix", "a", "--period", "a"]) == 0
    assert capsys.readouterr().out.strip() == "false"


def test_member_rejects_foreign_letter(tmp_path):
    assert run_cli(["member", _loop_file(tmp_path, 2), "--period", "z"]) == 2


def test_enumerate(capsys):
    assert run_cli(["enumerate", "--states", "1", "--max-priority", "3", "--count-only"]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert run_cli(["enumerate", "--states", "1", "--max-priority", "2", "--mfts"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["marker"] == {"node": "0", "kind": "p"}


def test_enumerate_cap_exit_code(capsys):
    assert run_cli(["enumerate", "--states", "2", "--max-priority", "2", "--cap", "1"]) == 3
    assert "error" in capsys.readouterr().err


def test_tightness(capsys):
    assert run_cli(["tightness", "--states", "1", "--max-priority", "2"]) == 0
    out = capsys.readouterr().out
    assert "3.0" in out
    assert "5" in out
    assert run_cli(["tightness", "--states", "1", "--max-priority", "3", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ratio"] == 2.0
    assert report["violations"] == []


def test_hardword_files_round_trip(tmp_path, capsys):
    automaton_out = str(tmp_path / "full.json")
    word_out = str(tmp_path / "word.json")
    args = ["hardword", "--states", "1", "--max-priority", "3", "--index", "0", "--h", "3",
            "--automaton-out", automaton_out, "--word-out", word_out]
    assert run_cli(args) == 0
    printed = json.loads(capsys.readouterr().out)
    assert (printed["beta"], printed["gamma"]) == ("L0", "L1")
    assert printed["word"]["period"] == ["L0", "L1", "L1"]
    assert printed["word"]["letters"]["L0"]["matrix"] == {"q0,q0": [3]}

    assert run_cli(["member", automaton_out, "--word", word_out]) == 0
    assert capsys.readouterr().out.strip() == "false"


def test_hardword_index_out_of_range():
    assert run_cli(["hardword", "--states", "1", "--max-priority", "2", "--index", "5"]) == 2


@pytest.mark.parametrize("priority", [1, 2])
def test_check(tmp_path, capsys, priority):
    assert run_cli(["check", _loop_file(tmp_path, priority), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["product_empty"]
    assert report["counterexamples"] == []


def test_usage_errors(tmp_path, capsys):
    assert run_cli(["tightness", "--bogus"]) == 2
    assert run_cli([]) == 2
    assert run_cli(["empty", str(tmp_path / "missing.json")]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text('{"kind": "rabin"}', encoding="utf-8")
    assert run_cli(["empty", str(broken)]) == 2


def test_version(capsys):
    assert run_cli(["--version"]) == 0
    assert "parity-complement" in capsys.readouterr().out

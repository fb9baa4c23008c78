import json
import subprocess
import sys

import pytest

from fragwords.cli import main, parse_alphabet
from fragwords.freegroup import EraserTuple, eraser_image
from fragwords.fim import fim_equal
from fragwords.words import LATIN, Alphabet


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    (tmp_path / "bicyclic.txt").write_text("alphabet: a\n# bicyclic monoid\naA = 1\n")
    (tmp_path / "idem.txt").write_text("alphabet: a b\naA = b\n")
    (tmp_path / "adder.json").write_text(json.dumps({
        "states": ["a", "i"],
        "alphabet": ["0", "1"],
        "transitions": {"a": {"0": ["i", "1"], "1": ["a", "0"]}, "i": {"0": ["i", "0"], "1": ["i", "1"]}},
    }))
    (tmp_path / "star.json").write_text(json.dumps({
        "states": 1, "initial": [0], "terminals": [0], "edges": [{"from": 0, "label": "a", "to": 0}],
    }))
    return tmp_path


def test_parse_alphabet_forms():
    abc = Alphabet.standard(3)
    for spec in ("alphabet: a b c", "a b c", "a,b,c", "abc"):
        assert parse_alphabet(spec) == abc
    assert parse_alphabet("x1 x2").names == ("x1", "x2")


def test_spec_exit_codes(capsys, files):
    assert run(capsys, "fragile", "check", "abAB")[0] == 0
    assert run(capsys, "eraser", "member", "1", "a", "a")[0] == 0
    code, out, _ = run(capsys, "stephen", "closure", "-p", str(files / "bicyclic.txt"), "-w", "a", "--budget", "50")
    assert code == 2 and out.startswith("exhausted")


def test_usage_errors(capsys, files):
    with pytest.raises(SystemExit) as exc:
        main(["fragile", "nonsense"])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 3
    code, _, err = run(capsys, "fragile", "check", "a b^x")
    assert code == 3 and "position 2" in err
    assert run(capsys, "fragile", "in-image", "a", "b")[0] == 3  # component 0 uses a
    assert run(capsys, "stephen", "wp", "-p", str(files / "missing.txt"), "a", "a")[0] == 3
    assert run(capsys, "fim", "covers", "ab")[0] == 3
    assert run(capsys, "--budget", "0", "stephen", "wp", "-p", str(files / "idem.txt"), "a", "a")[0] == 3


def test_fragile_commands(capsys):
    code, data = run_json(capsys, "fragile", "in-image", "bcbcc", "accac", "aabb")
    assert code == 0 and data["answer"] is True
    A = Alphabet.standard(3)
    t = EraserTuple(A, tuple(A.parse(x) for x in ("bcbcc", "accac", "aabb")))
    assert eraser_image(A.parse(data["preimage"]), A) == t
    assert run(capsys, "fragile", "in-image", "b", "1", "1")[0] == 1
    assert run(capsys, "fragile", "preimage", "b", "1", "1")[0] == 1
    assert run(capsys, "fragile", "check", "abcABC")[0] == 1
    code, out, _ = run(capsys, "fragile", "image", "abAB")
    assert code == 0 and out.split() == ["1", "1"]
    code, data = run_json(capsys, "fragile", "commutator", "-n", "3")
    assert data["length"] == 10
    code, out, _ = run(capsys, "--alphabet", "x y", "fragile", "check", "x y x^-1 y^-1")
    assert code == 0


def test_fim_commands(capsys, files):
    assert run(capsys, "fim", "equal", "aAa", "a")[0] == 0
    assert run(capsys, "fim", "equal", "ab", "ba")[0] == 1
    code, data = run_json(capsys, "fim", "factors", "aA")
    assert data["count"] == 5 and data["factors"][0] == "1"
    assert run(capsys, "fim", "member", "-u", "aa", "-L", str(files / "star.json"))[0] == 0
    assert run(capsys, "fim", "member", "-u", "b", "-L", str(files / "star.json"))[0] == 1
    code, data = run_json(capsys, "fim", "covers", "aAbB")
    assert data["covers"] == ["aA", "bB"]


def test_stephen_commands(capsys, files):
    idem = str(files / "idem.txt")
    code, data = run_json(capsys, "stephen", "closure", "-p", idem, "-w", "b")
    assert code == 0 and data["status"] == "converged" and data["iterations"] <= 5
    assert run(capsys, "stephen", "wp", "-p", idem, "b", "aA")[0] == 0
    code, data = run_json(capsys, "stephen", "wp", "-p", str(files / "bicyclic.txt"), "--budget", "20", "a", "aa")
    assert code == 2 and data["answer"] == "unknown"
    assert run(capsys, "stephen", "order", "-p", idem, "aA", "1")[0] == 0


def test_eraser_commands(capsys, files):
    code, data = run_json(capsys, "eraser", "member", "bc", "ca", "ab")
    assert code == 1 and data["answer"] is False
    assert run(capsys, "eraser", "witness", "bB", "1", "aA")[0] == 1
    comps = ("bB", "aA", "abAB")
    code, data = run_json(capsys, "eraser", "witness", *comps)
    assert code == 0
    A = Alphabet.standard(3)
    w = A.parse(data["witness"])
    assert all(fim_equal(w.delete(i), A.parse(c)) for i, c in enumerate(comps))
    code, data = run_json(capsys, "eraser", "member", "-p", str(files / "idem.txt"), "--budget", "30", "b", "aA")
    assert code == 2 and data["status"] == "budget"
    code, data = run_json(capsys, "eraser", "image", "-p", str(files / "idem.txt"), "-w", "ab")
    assert data["components"] == ["b", "a"]
    assert run(capsys, "eraser", "kernel", "-w", "abAB")[0] == 0
    assert run(capsys, "eraser", "kernel", "-w", "ab")[0] == 1


def test_td_commands(capsys, files):
    t = str(files / "adder.json")
    code, out, _ = run(capsys, "td", "act", "-t", t, "-w", "a", "-u", "110")
    assert code == 0 and out.strip() == "001"
    code, data = run_json(capsys, "td", "relation", "-t", t, "-w", "aiA", "-d", "6")
    assert code == 0 and data["fragile_over_support"] is False
    assert run(capsys, "td", "relation", "-t", t, "-w", "a", "-d", "3")[0] == 1
    out_path = files / "ext.json"
    assert run(capsys, "td", "extend", "-t", t, "-o", str(out_path))[0] == 0
    ext = json.loads(out_path.read_text())
    assert ext["states"] == ["a", "i", "e"] and ext["transitions"]["a"]["a"] == ["e", "a"]


def test_json_is_byte_stable(capsys, files):
    cmds = [
        ("stephen", "closure", "-p", str(files / "idem.txt"), "-w", "aA"),
        ("fim", "factors", "abA"),
        ("eraser", "member", "bB", "cC", "1"),
        ("fragile", "in-image", "bcbcc", "accac", "aabb"),
    ]
    for cmd in cmds:
        first = run(capsys, "--json", *cmd)[1]
        assert first == run(capsys, "--json", *cmd)[1]
        assert first == json.dumps(json.loads(first), sort_keys=True, ensure_ascii=False) + "\n"


def test_printed_words_round_trip(capsys):
    _, data = run_json(capsys, "fim", "factors", "abAB")
    for text in data["factors"]:
        assert LATIN.format(LATIN.parse(text)) == text
    _, data = run_json(capsys, "--alphabet", "x1 x2 x3", "fragile", "preimage", "x2 x3", "x1 x3", "x1 x2")
    A = Alphabet(["x1", "x2", "x3"])
    assert A.format(A.parse(data["preimage"])) == data["preimage"]


def test_dot_export(capsys, files):
    dot = files / "out.dot"
    assert run(capsys, "--dot", str(dot), "stephen", "closure", "-p", str(files / "idem.txt"), "-w", "b")[0] == 0
    text = dot.read_text()
    assert text.startswith("digraph") and "doublecircle" in text


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "fragwords", "fragile", "check", "abAB"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "YES"

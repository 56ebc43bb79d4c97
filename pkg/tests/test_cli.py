import io
import json

import pytest

from substruct.algebra import lukasiewicz3, two_chain_join
from substruct.cli import run
from substruct.frames import frame_from_json, frame_to_json, heap_frame
from substruct.lattice import FinitePoset, chain


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.fixture
def luk(tmp_path):
    return write(tmp_path, "luk.json", lukasiewicz3().to_json())


def test_lattice_check(tmp_path, capsys):
    path = write(tmp_path, "c3.json", chain(3).to_json())
    assert run(["lattice", "check", "--json", path]) == 0
    rep = out_json(capsys)
    assert rep["size"] == 3 and rep["prime_filters"] == [[2], [1, 2]]


def test_lattice_check_rejects_pentagon(tmp_path, capsys):
    leq = FinitePoset(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).pairs()
    path = write(tmp_path, "n5.json", {"size": 5, "leq": leq})
    assert run(["lattice", "check", "--json", path]) == 1
    assert out_json(capsys)["error"] == "NotDistributive"


def test_algebra_check(luk, tmp_path, capsys):
    assert run(["algebra", "check", "--json", luk]) == 0
    assert out_json(capsys)["residuated"] is True
    bad = write(tmp_path, "join.json", two_chain_join().to_json())
    assert run(["algebra", "check", "--json", bad]) == 1


def test_algebra_holds(luk, capsys):
    assert run(["algebra", "holds", "--eq", "p * q <= q * p", luk]) == 0
    capsys.readouterr()
    assert run(["algebra", "holds", "--json", "--eq", "p <= p * p", luk]) == 1
    assert out_json(capsys)["witness"] == {"p": 1}


def test_canext_report(luk, capsys):
    assert run(["canext", "report", "--json", luk]) == 0
    rep = out_json(capsys)
    assert rep["size"] == 3 and rep["ops"]["tensor"]["smooth"] is True


def test_heap_pipeline(tmp_path, capsys):
    assert run(["frame", "heap", "--addrs", "1", "--vals", "1"]) == 0
    obj = out_json(capsys)
    assert frame_from_json(obj, validate=False) == heap_frame(1, 1)
    path = write(tmp_path, "heap.json", obj)
    assert run(["frame", "rcc", path]) == 0
    assert run(["frame", "check", path]) == 0


def test_heap_rcc_failure(tmp_path, capsys):
    path = write(tmp_path, "heap.json", frame_to_json(heap_frame(1, 2)))
    assert run(["frame", "rcc", "--json", path]) == 1
    assert out_json(capsys)["witness"] == ["overline", 0, 1]
    assert run(["frame", "check", "--json", path]) == 1
    assert out_json(capsys)["error"] == "NotMonotone"


def test_heap_cap_is_usage_error(capsys):
    assert run(["frame", "heap", "--addrs", "6", "--vals", "4", "--max-worlds-heap", "100"]) == 2


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(frame_to_json(heap_frame(2, 1)))))
    assert run(["frame", "rcc", "-"]) == 0


def test_model_check(tmp_path, capsys):
    frame = write(tmp_path, "heap.json", frame_to_json(heap_frame(1, 1)))
    val = write(tmp_path, "val.json", {"p": [1]})
    assert run(["mc", "--json", "--frame", frame, "--val", val, "--phi", "I * p"]) == 0
    assert out_json(capsys)["worlds"] == [1]
    assert run(["mc", "--frame", frame, "--val", val, "--phi", "p", "--world", "0"]) == 1


def test_valid(tmp_path, capsys):
    frame = write(tmp_path, "heap.json", frame_to_json(heap_frame(2, 2)))
    assert run(["valid", "--frame", frame, "--eq", "a * b <= b * a"]) == 0
    capsys.readouterr()
    assert run(["valid", "--json", "--frame", frame, "--eq", "a <= a * a"]) == 1
    assert out_json(capsys)["counter_valuation"] == {"a": [4]}


def test_counter_and_replay(tmp_path, capsys):
    assert run(["counter", "--eq", "p <= p * p"]) == 0
    rep = out_json(capsys)
    assert rep["found"] and rep["route"] == "algebraic"
    path = write(tmp_path, "cm.json", rep)
    # the emitted countermodel is itself a frame file
    assert run(["valid", "--frame", path, "--eq", "p <= p * p"]) == 1


def test_counter_is_deterministic(capsys):
    run(["counter", "--eq", "p * q <= q * p", "--seed", "3"])
    a = capsys.readouterr().out
    run(["counter", "--eq", "p * q <= q * p", "--seed", "3"])
    assert capsys.readouterr().out == a


def test_counter_not_found(capsys):
    assert run(["counter", "--json", "--eq", "p <= p", "--max-worlds", "2", "--max-elements", "3"]) == 1
    assert out_json(capsys)["found"] is False


def test_jt_commands(luk, capsys):
    assert run(["jt", "frame", luk]) == 0
    f = frame_from_json(out_json(capsys))
    assert f.size == 2
    assert run(["jt", "compare", luk]) == 0
    capsys.readouterr()
    assert run(["jt", "truth", "--json", "--phi", "p", "--psi", "p * p", "--val", '{"p": 1}', luk]) == 0
    assert out_json(capsys)["filter"] == [1, 2]
    assert run(["jt", "truth", "--phi", "p * p", "--psi", "p", "--val", '{"p": 1}', luk]) == 1


@pytest.mark.parametrize("argv", [
    ["algebra", "holds", "--eq", "p <=", "missing.json"],
    ["lattice", "check", "/nonexistent/file.json"],
    ["frame", "frobnicate"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_bad_formula(luk, capsys):
    assert run(["algebra", "holds", "--eq", "p <= (q", luk]) == 2
    assert "error" in capsys.readouterr().err


def test_selftest_subset(capsys):
    assert run(["selftest", "--only", "1"]) == 0
    assert capsys.readouterr().out.startswith("[PASS]  1. ")


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0

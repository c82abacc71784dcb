import io
import json
from pathlib import Path

import pytest

from builders import a3
from qlab.cli import REPORT_SCHEMA, main
from qlab.quiver import parse_bound_quiver, serialize

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys, monkeypatch, stdin=""):
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_abelian_then_classify(capsys, monkeypatch):
    code, quiver, _ = run(["gen", "abelian", "--orders", "4,4"], capsys, monkeypatch)
    assert code == 0
    code, out, _ = run(["classify", "--n", "2"], capsys, monkeypatch, quiver)
    assert code == 0
    assert out.splitlines()[0] == "verdict: Tame(d=3)"


def test_gen_ade_then_hilbert(capsys, monkeypatch):
    code, quiver, _ = run(
        ["gen", "ade", "--family", "A", "--l", "5", "--loops", "--relations", "xi", "--J", ""], capsys, monkeypatch
    )
    assert code == 0
    code, out, _ = run(["hilbert", "--tmax", "3", "--format", "json"], capsys, monkeypatch, quiver)
    assert code == 0
    hil = json.loads(out)["hilbert"]
    assert len(hil) == 6
    assert all(v == [1, 3, 3, 1] for v in hil.values())


def test_dual_twice_is_byte_identical(capsys, monkeypatch):
    _, quiver, _ = run(["gen", "relations", "--family", "sr", "--orders", "4,5"], capsys, monkeypatch)
    _, once, _ = run(["dual"], capsys, monkeypatch, quiver)
    _, twice, _ = run(["dual"], capsys, monkeypatch, once)
    _, thrice, _ = run(["dual"], capsys, monkeypatch, twice)
    assert once == thrice
    assert parse_bound_quiver(twice).quiver == parse_bound_quiver(quiver).quiver


def test_trivext_slice_mutate_cover(capsys, monkeypatch):
    code, out, _ = run(["trivext"], capsys, monkeypatch, serialize(a3()))
    assert code == 0
    assert len(json.loads(out)["arrows"]) == 4
    _, quiver, _ = run(["gen", "abelian", "--orders", "4,4"], capsys, monkeypatch)
    code, sl, _ = run(["slice", "--at", "0"], capsys, monkeypatch, quiver)
    assert code == 0 and len(json.loads(sl)["vertices"]) == 48
    code, moved, _ = run(["mutate", "--at", "0", "--all-sources"], capsys, monkeypatch, quiver)
    _, sl1, _ = run(["slice", "--at", "1"], capsys, monkeypatch, quiver)
    assert code == 0 and moved == sl1
    code, cov, _ = run(["cover", "--from", "0", "--to", "3", "--format", "dot"], capsys, monkeypatch, quiver)
    assert code == 0 and cov.startswith("digraph")
    code, cov, _ = run(["cover", "--mode", "znq", "--from", "0", "--to", "1"], capsys, monkeypatch, serialize(a3()))
    assert code == 0 and len(json.loads(cov)["vertices"]) == 6


def test_koszul_command(capsys, monkeypatch):
    _, delta, _ = run(["trivext"], capsys, monkeypatch, serialize(a3()))
    code, out, _ = run(["koszul", "--tmax", "3"], capsys, monkeypatch, delta)
    assert code == 0
    assert out.splitlines()[0] == "finite q = 2: ker f_2 concentrated in degree 4"


def test_validation_errors_exit_two(capsys, monkeypatch):
    code, _, err = run(["dual"], capsys, monkeypatch, "{broken")
    assert code == 2
    assert json.loads(err)["error"] == "parse"
    code, _, err = run(["gen", "relations", "--family", "sr", "--orders", "3,4"], capsys, monkeypatch)
    assert code == 2
    assert json.loads(err)["error"] == "size-too-small"
    code, _, err = run(["hilbert", "--tmax", "-1"], capsys, monkeypatch, serialize(a3()))
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--hmax", "many"])
    assert exc.value.code == 2


def test_mathematical_errors_exit_three(capsys, monkeypatch):
    doc = {"vertices": ["1", "2"], "arrows": [{"id": "a", "from": "1", "to": "2"}], "relations": []}
    code, _, err = run(["trivext"], capsys, monkeypatch, json.dumps(doc))
    assert code == 3
    assert json.loads(err)["error"] == "non-quadratic"
    cubic = {
        "vertices": ["1"],
        "arrows": [{"id": "x", "from": "1", "to": "1"}],
        "relations": [[{"coeff": "1", "path": ["x", "x", "x"]}]],
    }
    code, _, err = run(["dual"], capsys, monkeypatch, json.dumps(cubic))
    assert code == 3
    assert json.loads(err)["error"] == "not-quadratic"


def test_report_matches_golden_file(capsys, monkeypatch):
    code, out, _ = run(["report", "--tmax", "3"], capsys, monkeypatch, serialize(a3()))
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == REPORT_SCHEMA
    assert doc["steps"]["classify"]["label"] == "Finite(h=4)"
    assert out == (GOLDEN / "report_a3.json").read_text(encoding="utf-8")


def test_report_for_family(capsys, monkeypatch):
    code, out, _ = run(["report", "--family", "sr", "--orders", "4,4", "--tmax", "2"], capsys, monkeypatch)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["seed"] == 0
    assert doc["steps"]["stable"]["stable"]
    assert doc["steps"]["classify"]["label"] == "Tame(d=3)"

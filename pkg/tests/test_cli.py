import json
import subprocess
import sys

import pytest

from pigraph.cli import main
from pigraph.corpus import CORPUS
from pigraph.formats import render_graph_json


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, g in CORPUS.items():
        path = tmp_path / f"{name}.json"
        path.write_text(render_graph_json(g))
        out[name] = str(path)
    sink = tmp_path / "sink.json"
    sink.write_text(json.dumps({"kind": "finite", "vertices": ["v", "s"], "edges": [{"id": "a", "src": "v", "dst": "s"}]}))
    out["sink"] = str(sink)
    broken = tmp_path / "broken.json"
    broken.write_text('{"kind": "finite", "vertices": [')
    out["broken"] = str(broken)
    return out


def test_classify_ok(files, tmp_path, capsys):
    report, dot = tmp_path / "r.json", tmp_path / "g.dot"
    assert main(["classify", files["G4"], "--witnesses", "--json", str(report), "--dot", str(dot)]) == 0
    assert "purely_infinite        true" in capsys.readouterr().out
    data = json.loads(report.read_text())
    assert data["purely_infinite"] and len(data["witnesses"]) == 4
    assert dot.read_text().startswith("digraph")


def test_assert_pi(files):
    assert main(["classify", files["G1"], "--assert-pi"]) == 0
    assert main(["classify", files["G3"], "--assert-pi"]) == 1


def test_sinks(files):
    assert main(["classify", files["sink"]]) == 2
    assert main(["classify", files["sink"], "--add-tails"]) == 0


def test_bad_input(files, capsys):
    assert main(["classify", files["broken"]]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["classify", "/nonexistent.json"]) == 2


def test_conditions(files, capsys):
    assert main(["conditions", files["G3"]]) == 0
    out = capsys.readouterr().out
    assert "DI                     false" in out and "K                      true" in out


def test_tails(files, capsys):
    assert main(["tails", files["G5"], "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "{v, w}" in out and "oracle agrees: true" in out
    assert main(["tails", files["G3"]]) == 2


def test_witness_synth_and_verify(files, tmp_path, capsys):
    out = tmp_path / "w.json"
    assert main(["witness", "synth", files["G4"], "--vertex", "stem:w", "--out", str(out)]) == 0
    assert main(["witness", "verify", files["G4"], str(out)]) == 0
    assert capsys.readouterr().out.strip().endswith("valid")
    assert main(["witness", "synth", files["G2"], "--vertex", "stem:u"]) == 1
    assert main(["witness", "synth", files["G1"], "--vertex", "stem:nope"]) == 2


def test_witness_verify_rejects(files, tmp_path, capsys):
    out = tmp_path / "w.json"
    main(["witness", "synth", files["G1"], "--vertex", "stem:u", "--out", str(out)])
    w = json.loads(out.read_text())
    w["second"] = w["first"]
    out.write_text(json.dumps(w))
    assert main(["witness", "verify", files["G1"], str(out)]) == 1
    assert "(d)" in capsys.readouterr().out
    w["first"][0]["beta"] = ["z"]
    out.write_text(json.dumps(w))
    assert main(["witness", "verify", files["G1"], str(out)]) == 2


def test_console_script(files):
    proc = subprocess.run(
        [sys.executable, "-m", "pigraph.cli", "classify", files["G1"]],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "purely_infinite        true" in proc.stdout


def test_consistency_violation_exit_code(files, monkeypatch, capsys):
    monkeypatch.setattr("pigraph.cli.consistency_check", lambda r, g: ["(K∧DI) ≠ purely_infinite"])
    assert main(["classify", files["G1"]]) == 3
    assert "consistency violation" in capsys.readouterr().err

import json
import random

import pytest

from oracles import random_graph
from pigraph.corpus import CORPUS, G1, G2, G3, G4, G5
from pigraph.formats import (
    ParseError,
    parse_graph_file,
    parse_graph_text,
    parse_witness_file,
    render_dot,
    render_graph_json,
    render_witness_json,
    witness_to_dict,
)
from pigraph.cylinders import synthesize_witness, verify_witness
from pigraph.graph_model import Edge, FiniteGraph, InvalidGraph, UnknownEdge, UnknownVertex
from pigraph.report import (
    SinksPresent,
    classify,
    consistency_check,
    parse_report_json,
    render_json,
)


def test_classify_g4():
    r = classify(G4)
    assert r.purely_infinite and r.property_IH
    assert not r.simple and not r.af_verdict
    assert r.graph_kind == "periodic"


def test_classify_g3():
    r = classify(G3)
    c = r.conditions
    assert (c.K, c.I, c.DI, c.DL) == (True, True, False, False)
    assert not r.purely_infinite and r.property_IH


def test_classify_g2():
    r = classify(G2)
    assert not r.purely_infinite
    assert not r.conditions.K and not r.conditions.essentially_principal
    assert r.conditions.certificates["K"]["vertex"] == "stem:u"


def test_implied_flags_follow_verdict():
    for g in CORPUS.values():
        r = classify(g)
        assert set(r.implied_flags.values()) == {r.purely_infinite}


def test_af_verdict():
    t = classify(FiniteGraph(["s"], []), add_tails=True)
    assert t.tails_added and t.af_verdict
    assert not classify(G1).af_verdict


def test_sinks_need_tails():
    g = FiniteGraph(["v", "s"], [Edge("l", "v", "v"), Edge("m", "v", "v"), Edge("a", "v", "s")])
    with pytest.raises(SinksPresent):
        classify(g)
    r = classify(g, add_tails=True)
    assert r.tails_added and not r.purely_infinite
    assert consistency_check(r, g) == []


def test_invalid_graph_rejected():
    with pytest.raises(InvalidGraph):
        classify(FiniteGraph(["v"], [Edge("a", "v", "x")]))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_consistency_corpus(name):
    g = CORPUS[name]
    assert consistency_check(classify(g, witnesses=True), g) == []


def test_fault_injection():
    r = classify(G3)
    r.conditions.DI = True
    assert "(K∧DI) ≠ purely_infinite" in consistency_check(r, G3)


def test_bad_witness_in_report_is_flagged():
    r = classify(G1, witnesses=True)
    w = r.witnesses["stem:u"]
    w["second"] = w["first"]
    assert any("fails verification" in p for p in consistency_check(r, G1))


def test_witnesses_attached_and_verified():
    r = classify(G4, witnesses=True)
    assert set(r.witnesses) == {"stem:v", "stem:w", "copy:1:c", "copy:1:d"}
    assert classify(G3, witnesses=True).witnesses == {}


def test_consistency_random():
    rng = random.Random(31)
    for _ in range(200):
        g = random_graph(rng)
        assert consistency_check(classify(g), g) == []


def test_report_round_trip():
    for g in (G1, G4, G5):
        r = classify(g, witnesses=True)
        text = render_json(r)
        assert parse_report_json(text) == r
        assert render_json(parse_report_json(text)) == text


def test_report_is_deterministic():
    assert render_json(classify(G4, witnesses=True)) == render_json(classify(G4, witnesses=True))


def test_report_notes_and_basis():
    d = json.loads(render_json(classify(G1)))
    assert d["basis"]["implied_flags"].startswith("implied by theorem")
    assert d["basis"]["af_verdict"].startswith("literature")
    assert any("ample groupoid" in n for n in d["notes"])


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_graph_round_trip(name, tmp_path):
    text = render_graph_json(CORPUS[name])
    path = tmp_path / "g.json"
    path.write_text(text)
    g = parse_graph_file(path)
    assert g == CORPUS[name]
    assert render_graph_json(g) == text


def test_graph_parse_errors():
    with pytest.raises(ParseError) as exc:
        parse_graph_text('{"kind": "finite",\n  "vertices": [}')
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_graph_text('{"kind": "cyclic"}')
    with pytest.raises(ParseError):
        parse_graph_text('{"kind": "finite", "vertices": ["v"], "edges": [{"id": "a", "src": "v"}]}')


def test_spec_style_graph_file():
    text = '{"kind":"finite","vertices":["v","w"],"edges":[{"id":"a","src":"v","dst":"w"},{"id":"e","src":"w","dst":"w"}]}'
    assert parse_graph_text(text) == G5


def test_dot_g1():
    dot = render_dot(G1)
    assert dot.startswith("digraph")
    assert dot.count('"u" -> "u"') == 2


def test_dot_periodic():
    dot = render_dot(G3)
    assert '"copy:3:c" [style=dashed' in dot
    assert "copy:4" not in dot
    assert dot.count("->") == 11


def test_witness_file_round_trip(tmp_path):
    w = synthesize_witness(G4, "stem:v")
    path = tmp_path / "w.json"
    path.write_text(render_witness_json(w))
    back = parse_witness_file(path, G4)
    assert back == w and verify_witness(back, G4) == []


def test_witness_file_unknown_ids(tmp_path):
    w = witness_to_dict(synthesize_witness(G1, "stem:u"))
    w["first"][0]["alpha"] = ["z"]
    path = tmp_path / "w.json"
    path.write_text(json.dumps(w))
    with pytest.raises(UnknownEdge):
        parse_witness_file(path, G1)
    w["mu"]["base"] = "stem:nowhere"
    path.write_text(json.dumps(w))
    with pytest.raises(UnknownVertex):
        parse_witness_file(path, G1)


def test_witness_file_spec_layout(tmp_path):
    text = json.dumps(
        {
            "mu": {"base": "stem:w", "edges": []},
            "first": [{"alpha": ["e", "e"], "beta": ["e"]}, {"alpha": ["f", "f"], "beta": ["f"]}, {"alpha": ["beta2"], "beta": ["beta2"]}],
            "second": [{"alpha": ["e", "f"], "beta": ["e"]}, {"alpha": ["f", "e"], "beta": ["f"]}, {"alpha": ["e", "beta2"], "beta": ["beta2"]}],
        }
    )
    path = tmp_path / "w.json"
    path.write_text(text)
    assert verify_witness(parse_witness_file(path, G4), G4) == []

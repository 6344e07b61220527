"""Property-based checks with hypothesis."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import conditions_oracle, covers_oracle, meet_oracle, random_graph, random_path
from pigraph.conditions import check_conditions
from pigraph.cylinders import (
    Bisection,
    SynthesisBudgetExceeded,
    bisection_compose,
    bisection_inverse,
    covers,
    cyl,
    cyl_disjoint,
    cyl_intersect,
    cyl_subset,
    cycle_words,
    synthesize_witness,
    verify_witness,
)
from pigraph.formats import parse_graph_text, render_graph_json
from pigraph.graph_model import Edge, FiniteGraph, NotComposable, Path, path_concat
from pigraph.report import classify, consistency_check
from pigraph.structure import VertexClass, classify_vertices, first_return_cycles
from pigraph.tails import brute_force_tails, enumerate_maximal_tails


@st.composite
def graphs(draw, max_vertices=6):
    n = draw(st.integers(1, max_vertices))
    names = [f"v{i}" for i in range(n)]
    edges = []
    for s in names:
        targets = draw(st.lists(st.sampled_from(names), min_size=1, max_size=4))
        edges += [(s, t) for t in targets]
    return FiniteGraph(names, [Edge(f"e{i}", s, t) for i, (s, t) in enumerate(edges)])


@st.composite
def graph_with_paths(draw, count=3, max_len=4):
    g = draw(graphs())
    v = draw(st.sampled_from(g.canonical_vertices()))
    paths = []
    for _ in range(count):
        p = Path.at(v)
        for _ in range(draw(st.integers(0, max_len))):
            arcs = g.out_edges(p.end)
            a = arcs[draw(st.integers(0, len(arcs) - 1))]
            p = Path(p.base, p.edges + (a.ref,), a.dst)
        paths.append(p)
    return g, paths


@given(graph_with_paths(count=2))
@settings(max_examples=200, deadline=None)
def test_intersection_trichotomy(case):
    g, (p, q) = case
    meet = cyl_intersect(cyl(p), cyl(q))
    assert meet in (cyl(p), cyl(q), None)
    assert (meet is None) == (not meet_oracle(g, p, q))
    assert (meet is None) == cyl_disjoint(cyl(p), cyl(q))
    if meet == cyl(p):
        assert cyl_subset(cyl(p), cyl(q))


@given(graph_with_paths(count=4))
@settings(max_examples=200, deadline=None)
def test_covers_against_oracle(case):
    g, (mu, *family) = case
    assert covers(family, mu, g).verdict == covers_oracle(g, family, mu)


@given(graph_with_paths(count=3))
@settings(max_examples=100, deadline=None)
def test_concat_associative(case):
    g, (p, q, r) = case
    try:
        left = path_concat(path_concat(p, q), r)
    except NotComposable:
        return
    assert left == path_concat(p, path_concat(q, r))
    assert len(left) == len(p) + len(q) + len(r)


@given(graph_with_paths(count=4))
@settings(max_examples=100, deadline=None)
def test_inverse_and_lag(case):
    g, (a, b, c, d) = case
    if a.end != b.end:
        return
    x = Bisection(a, b)
    assert bisection_inverse(bisection_inverse(x)) == x
    assert bisection_inverse(x).lag == -x.lag
    if c.end == d.end:
        y = Bisection(c, d)
        try:
            z = bisection_compose(x, y)
        except NotComposable:
            return
        assert z.lag == x.lag + y.lag and z.well_formed


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_first_return_cycles_incomparable(g):
    for v in g.canonical_vertices():
        ws = first_return_cycles(g, v).witnesses
        for i in range(len(ws)):
            for j in range(i):
                assert not ws[i].comparable(ws[j])


@given(graphs(), st.integers(1, 6))
@settings(max_examples=100, deadline=None)
def test_cycle_words_disjoint(g, budget):
    cls = classify_vertices(g)
    for v in cls.members(VertexClass.V2):
        mu, nu = cls.cycles_at(v)[:2]
        ws = cycle_words(mu, nu, budget)
        assert all(w.is_cycle for w in ws)
        for i in range(len(ws)):
            for j in range(i):
                assert cyl_disjoint(cyl(ws[i]), cyl(ws[j]))


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_conditions_against_oracle(g):
    rep = check_conditions(g)
    o = conditions_oracle(g)
    assert (rep.K, rep.I, rep.DI, rep.DL) == (o["K"], o["I"], o["DI"], o["DL"])


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_consistency_and_tails(g):
    r = classify(g)
    assert consistency_check(r, g) == []
    fast = sorted(sorted(t.members) for t in enumerate_maximal_tails(g))
    assert fast == sorted(sorted(m) for m in brute_force_tails(g))


@given(graphs(max_vertices=5))
@settings(max_examples=60, deadline=None)
def test_synthesis_sound(g):
    if not classify(g).purely_infinite:
        return
    for v in g.canonical_vertices():
        try:
            w = synthesize_witness(g, v)
        except SynthesisBudgetExceeded:
            # a legitimate, reported outcome; never a wrong witness
            continue
        assert verify_witness(w, g) == []


@given(graphs())
@settings(max_examples=100, deadline=None)
def test_graph_json_round_trip(g):
    text = render_graph_json(g)
    assert parse_graph_text(text) == g
    assert render_graph_json(parse_graph_text(text)) == text


def test_random_generator_has_no_sinks():
    rng = random.Random(0)
    for _ in range(200):
        g = random_graph(rng)
        assert all(g.out_edges(v) for v in g.canonical_vertices())
        path = random_path(g, rng, g.canonical_vertices()[0], 5)
        assert g.path(path.base, path.edges) == path

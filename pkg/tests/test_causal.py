from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from adhesive import catalog
from adhesive.causal import (CiSet, CiStatement, ci_set_dag, ci_set_mrf, ci_subset, d_separated,
                             is_dag, moral_graph)
from adhesive.hypergraph import Digraph, Graph, maximal_cliques_chordal, rio_ordering, separates

from oracles import d_separated_paths, graph_separated

NODES = "ABCDEFG"


@st.composite
def dags(draw, max_nodes=7):
    n = draw(st.integers(2, max_nodes))
    nodes = NODES[:n]
    # arcs only from lower to higher position keep the graph acyclic
    pairs = list(combinations(nodes, 2))
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return Digraph(nodes, arcs)


@st.composite
def dag_and_triple(draw):
    d = draw(dags())
    labels = draw(st.lists(st.integers(0, 3), min_size=len(d.nodes), max_size=len(d.nodes)))
    a = {v for v, t in zip(d.nodes, labels) if t == 1}
    b = {v for v, t in zip(d.nodes, labels) if t == 2}
    c = {v for v, t in zip(d.nodes, labels) if t == 3}
    return d, a, b, c


def test_is_dag():
    assert is_dag(catalog.G1)
    assert not is_dag(Digraph("AB", [("A", "B"), ("B", "A")]))
    with pytest.raises(ValueError):
        d_separated(Digraph("AB", [("A", "B"), ("B", "A")]), "A", "B")


def test_d_separation_basic_patterns():
    chain = Digraph("XYZ", [("X", "Y"), ("Y", "Z")])
    fork = Digraph("XYZ", [("Y", "X"), ("Y", "Z")])
    collider = Digraph("XYZ", [("X", "Y"), ("Z", "Y")])
    for d in (chain, fork):
        assert d_separated(d, "X", "Z", "Y")
        assert not d_separated(d, "X", "Z")
    assert d_separated(collider, "X", "Z")
    assert not d_separated(collider, "X", "Z", "Y")
    with pytest.raises(ValueError):
        d_separated(chain, "X", "X")


def test_g1_statements():
    ci = ci_set_dag(catalog.G1)
    assert CiStatement("A", "C", "B") in ci
    assert CiStatement("A", "CD", "B") in ci
    assert CiStatement("A", "C") not in ci


def test_moral_graph_ic():
    m = moral_graph(catalog.IC_DAG)
    assert m.has_edge("X0", "X1")
    assert m.has_edge("M", "Y0") and m.has_edge("M", "Y1")
    assert not m.has_edge("Y0", "Y1")


def test_ci_subset_examples():
    g1 = ci_set_dag(catalog.G1)
    ok, wit = ci_subset(g1, g1)
    assert ok and wit == []
    with pytest.raises(ValueError):
        ci_subset(g1, ci_set_dag(catalog.IC_DAG))


def test_ci_statement_parse_and_canonical():
    s = CiStatement.parse("B,A _|_ C | D")
    assert s == CiStatement(("C",), ("A", "B"), ("D",))
    assert CiSet.from_json(CiSet([s], "ABCD").to_json(), "ABCD") == CiSet([s], "ABCD")
    with pytest.raises(ValueError):
        CiStatement("A", "A")


@settings(max_examples=400, deadline=None)
@given(dag_and_triple())
def test_d_separation_matches_path_oracle(t):
    d, a, b, c = t
    if not a or not b:
        return
    got = d_separated(d, a, b, c)
    assert got == d_separated_paths(d.nodes, list(d.arcs), a, b, c)
    assert got == d_separated(d, b, a, c)


@settings(max_examples=60, deadline=None)
@given(dags(max_nodes=5))
def test_ci_set_dag_decomposition_and_oracle(d):
    ci = ci_set_dag(d)
    for s in ci:
        assert d_separated_paths(d.nodes, list(d.arcs), set(s.a), set(s.b), set(s.c))
        for k in range(1, len(s.a)):
            for sub in combinations(s.a, k):
                assert CiStatement(sub, s.b, s.c) in ci


@settings(max_examples=60, deadline=None)
@given(dags(max_nodes=5))
def test_moralization_loses_statements(d):
    assert ci_subset(ci_set_mrf(moral_graph(d)), ci_set_dag(d))[0]


@settings(max_examples=60, deadline=None)
@given(dags(max_nodes=5))
def test_mrf_enumeration_complete(d):
    g = d.skeleton()
    ci = ci_set_mrf(g)
    nodes = g.nodes
    edges = [tuple(e) for e in g.edges]
    for labels in product((0, 1, 2, 3), repeat=len(nodes)):
        a = tuple(v for v, t in zip(nodes, labels) if t == 1)
        b = tuple(v for v, t in zip(nodes, labels) if t == 2)
        c = tuple(v for v, t in zip(nodes, labels) if t == 3)
        if a and b:
            assert (CiStatement(a, b, c) in ci) == graph_separated(nodes, edges, a, b, c)


def test_chordal_mrf_contains_rio_separators():
    for h in (catalog.M1, catalog.M2, catalog.GRAHAM_ACYCLIC):
        g = Graph(h.nodes, [p for e in h.edges for p in combinations(sorted(e), 2)])
        ci = ci_set_mrf(g)
        r = rio_ordering(maximal_cliques_chordal(g))
        seen = set()
        for e, s, res in zip(r.edges, r.separators, r.residuals):
            before = tuple(sorted(seen - s))
            if res and before:
                assert CiStatement(tuple(sorted(res)), before, tuple(sorted(s))) in ci
                assert separates(g, res, before, s)
            seen |= e

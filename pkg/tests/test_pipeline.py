import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adhesive import catalog
from adhesive.causal import CiStatement, ci_set_dag
from adhesive.distributions import (MarginalScenario, entropy_vector, is_conditionally_independent,
                                    marginalize, random_table, vorobev_extend)
from adhesive.entropy_cone import EntropyCoordSpace, cmi_row
from adhesive.hypergraph import Digraph, GuardExceeded, Hypergraph
from adhesive.pipeline import (CaseIIIRejection, approximation_report, classify, entropic_characterize,
                               entropic_characterize_causal, entropic_projection, non_shannon_rows, render,
                               scenario_hash, triangulate_scenario)
from adhesive.polyhedra import LinIneqSystem, equivalent, implies, normalize_row

from helpers import entropic_ok

IC_VARS = ("M", "X0", "X1", "Y0", "Y1")


def rowset(system):
    return {normalize_row(r) for r in system.ineqs}


def ic_rows(coords, with_ic):
    """The information causality system written out by hand."""
    space = EntropyCoordSpace(IC_VARS)
    full = space.coords

    def h(*vs):
        r = [0] * (len(full) + 1)
        r[full.index("H(" + ",".join(sorted(vs)) + ")")] = 1
        return r

    def comb(*terms):
        out = [0] * (len(full) + 1)
        for k, r in terms:
            out = [a + k * b for a, b in zip(out, r)]
        return out

    rows = []
    for x, y in (("X0", "Y0"), ("X1", "Y1")):
        rows.append(comb((1, h(x)), (1, h(y)), (-1, h(x, y))))  # I(X:Y) >= 0
        rows.append(comb((1, h(x, y)), (-1, h(x))))  # H(Y|X) >= 0
        rows.append(comb((1, h(x, y)), (-1, h(y))))  # H(X|Y) >= 0
    if with_ic:
        rows.append(comb((1, h("M")), (-1, h("X0")), (-1, h("Y0")), (1, h("X0", "Y0")),
                         (-1, h("X1")), (-1, h("Y1")), (1, h("X1", "Y1"))))
    return rowset(LinIneqSystem(coords, tuple(tuple(r[full.index(c)] for c in coords) + (0,) for r in rows)))


def test_chsh_triangulations_and_witnesses():
    tris = triangulate_scenario(catalog.CHSH)
    assert len(tris) == 2
    wit = [set(t.ci.maximal()) for t in tris]
    assert any(CiStatement(("B1",), ("B2",), ("A1", "A2")) in w for w in wit)
    assert any(CiStatement(("A1",), ("A2",), ("B1", "B2")) in w for w in wit)
    assert all(len(w) == 1 for w in wit)


def test_classify_worked_examples():
    assert classify(catalog.M1, catalog.G1).case == "i"
    assert classify(catalog.M1, catalog.G2).case == "i"
    v = classify(catalog.M2, catalog.G1)
    assert v.case == "ii"
    assert CiStatement("A", "C", "B") in v.witnesses and CiStatement("C", "D", "B") in v.witnesses
    assert CiStatement("A", "D", "B") in v.g_minus_t[0]
    v = classify(catalog.IC_SCENARIO, catalog.IC_DAG)
    assert v.case == "iii"
    # the family {X_i _|_ Y_j | M} is not inside I(T): the diagonal pairs are missing
    assert CiStatement(("X0",), ("Y0",), ("M",)) in v.witnesses
    assert CiStatement(("X1",), ("Y1",), ("M",)) in v.witnesses
    assert CiStatement(("M",), ("X0", "X1", "Y0", "Y1")) in v.counter_witnesses
    assert json.loads(json.dumps(v.to_json()))["case"] == "iii"


def test_classify_with_markov_field_and_partial_flag():
    from adhesive.hypergraph import Graph
    g = Graph("ABCD", [("A", "B"), ("B", "C"), ("B", "D")])
    assert classify(catalog.M1, g).case == "i"
    v = classify(catalog.CHSH, Digraph(catalog.CHSH.nodes, []), cap=1)
    assert v.partial
    with pytest.raises(ValueError):
        classify(catalog.M1, Digraph("AB", [("A", "B")]))


def test_information_causality_systems():
    s = entropic_characterize_causal(catalog.IC_SCENARIO, catalog.IC_DAG)
    assert s.meta["case"] == "iii"
    assert rowset(s) == ic_rows(s.coords, True)
    t = entropic_characterize(catalog.IC_SCENARIO)
    extra = rowset(t) - ic_rows(t.coords, False)
    assert ic_rows(t.coords, False) <= rowset(t)
    # the only other row is positivity of the singleton edge {M}
    assert extra == {tuple(1 if c == "H(M)" else 0 for c in t.coords) + (0,)}
    with pytest.raises(CaseIIIRejection):
        entropic_characterize_causal(catalog.IC_SCENARIO, catalog.IC_DAG, combine=True)
    with pytest.raises(CaseIIIRejection):
        entropic_characterize(catalog.IC_SCENARIO, structure=catalog.IC_DAG)


def test_case_one_uses_triangulation():
    a = entropic_characterize_causal(catalog.M1, catalog.G1)
    b = entropic_characterize(catalog.M1)
    assert a.meta["case"] == "i" and equivalent(a, b)


def test_case_two_projects_structure_ci():
    s = entropic_characterize_causal(catalog.M2, catalog.G1)
    assert s.meta["case"] == "ii"
    space = EntropyCoordSpace(tuple("ABCD"))
    # I(A:D|B) = 0 lives on the kept coordinates of edge ABD
    row = cmi_row(space, "A", "D", "B")
    row = [row[space.coords.index(c)] for c in s.coords] + [0]
    assert implies(s, row, equality=True)


def test_guards():
    big = Hypergraph([[f"V{i}", f"V{i + 1}"] for i in range(8)])
    with pytest.raises(GuardExceeded):
        entropic_characterize(big)


def test_render_provenance():
    s = entropic_characterize(catalog.CHSH)
    text = render(s)
    assert f"# scenario-hash: {scenario_hash(catalog.CHSH)}" in text
    assert "# ci: " in text and "# elimination-order: " in text
    data = json.loads(render(s, "json"))
    assert data["provenance"]["scenario_hash"] == scenario_hash(catalog.CHSH)
    assert LinIneqSystem.from_json(data["system"]) == s


def test_chsh_entropic_projection():
    s = entropic_characterize(catalog.CHSH)
    shannon = entropic_projection(tuple(catalog.CHSH.nodes), (), s.coords)
    # four variables: the triangulated projection coincides with the Shannon one
    assert equivalent(s, shannon)
    # one Braunstein-Caves row per distinguished pair, three polymatroid rows per edge
    bc = [r for r in s.ineqs if sorted(abs(v) for v in r if v) == [1] * 6]
    assert len(bc) == 4 and len(s.ineqs) == 4 + 4 * 3
    assert non_shannon_rows(s, catalog.CHSH.nodes) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_case_one_completion(seed):
    """Marginals on M1 of any joint admit a completion obeying I(G1)."""
    rng = random.Random(seed)
    p = random_table("ABCD", rng)
    q = vorobev_extend(MarginalScenario.from_joint(p, catalog.M1))
    for e in catalog.M1.edges:
        assert marginalize(q, e).reorder(sorted(e)) == marginalize(p, e).reorder(sorted(e))
    for stmt in ci_set_dag(catalog.G1).maximal():
        assert is_conditionally_independent(q, stmt.a, stmt.b, stmt.c)


CHSH_SYSTEMS = {}


def chsh_systems():
    if not CHSH_SYSTEMS:
        tri = entropic_characterize(catalog.CHSH)
        CHSH_SYSTEMS["tri"] = tri
        CHSH_SYSTEMS["parts"] = [entropic_characterize(catalog.CHSH, which=[i]) for i in (0, 1)]
    return CHSH_SYSTEMS


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_entropic_points_inside_triangulated_projection(seed):
    rng = random.Random(seed)
    p = random_table(catalog.CHSH.nodes, rng, zero_prob=rng.choice([0.0, 0.3]))
    ev = entropy_vector(p)
    for s in [chsh_systems()["tri"]] + chsh_systems()["parts"]:
        assert entropic_ok(s, ev.point(s.coords), tol=1e-8)


def test_approximation_report_small():
    rep = approximation_report(catalog.CHSH)
    for r in rep.relations:
        assert r.relation in ("equal", "strict")
        assert r.forward_checked or r.relation == "equal"
    assert rep.relation("triangulated", "shannon").relation == "equal"
    single = approximation_report(Hypergraph(["AB"]))
    assert all(r.relation == "equal" for r in single.relations)
    assert "scenario" in single.summary()


def test_approximation_report_triangle_all_equal():
    # three pairwise marginals of three variables: the only triangulation is
    # the full clique, so every member coincides with the Shannon projection
    rep = approximation_report(Hypergraph(["AB", "BC", "AC"]))
    assert all(r.relation == "equal" for r in rep.relations)

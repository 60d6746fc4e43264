"""Acceptance criteria, one test per criterion.

Run with pytest (the summary prints one PASS/FAIL line per criterion) or
directly: ``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from math import comb
from pathlib import Path

import pytest

from adhesive import catalog
from adhesive.causal import CiStatement
from adhesive.corr_polytope import bell_project
from adhesive.distributions import adhesive_glue, entropy_vector, marginalize, random_table
from adhesive.entropy_cone import EntropyCoordSpace, ci_hyperplanes, shannon_cone, shannon_row_count
from adhesive.hypergraph import graham
from adhesive.pipeline import (classify, entropic_characterize, entropic_characterize_causal,
                               non_shannon_rows, triangulate_scenario)
from adhesive.polyhedra import LinIneqSystem, enumerate_rays, equivalent, implies, in_projection, normalize_row

import expensive


def best_of(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return out, best


def test_criterion_01_graham(record_property):
    (a, b), dt = best_of(lambda: (graham(catalog.GRAHAM_CYCLIC), graham(catalog.GRAHAM_ACYCLIC)), repeat=20)
    record_property("detail", f"{dt * 1e3:.3f} ms for both inputs")
    assert not a[0]
    assert a[2].edges == {frozenset("BC"), frozenset("BE"), frozenset("CE")}
    assert b[0] and not b[2].edges
    assert dt < 1e-3


def test_criterion_02_chsh_triangulations(record_property):
    t = time.perf_counter()
    tris = triangulate_scenario(catalog.CHSH)
    dt = time.perf_counter() - t
    record_property("detail", f"{len(tris)} triangulations, {dt * 1e3:.1f} ms")
    witnesses = sorted(tuple(t.ci.maximal()) for t in tris)
    assert witnesses == sorted([(CiStatement(("B1",), ("B2",), ("A1", "A2")),),
                                (CiStatement(("A1",), ("A2",), ("B1", "B2")),)])
    assert dt < 1.0


def test_criterion_03_chsh_facets(record_property):
    from test_corr_polytope import chsh_oracle_facets, tight_sets

    t = time.perf_counter()
    systems = {mode: bell_project(catalog.CHSH, mode) for mode in ("direct", "via_triangulation")}
    want = list(chsh_oracle_facets())
    for s in systems.values():
        assert sorted(tight_sets(s, catalog.CHSH.nodes), key=sorted) == want
    assert equivalent(systems["direct"], systems["via_triangulation"])
    dt = time.perf_counter() - t
    record_property("detail", f"{len(want)} hull facets in both modes, {dt:.1f} s")
    assert dt < 120


def five_var_expected(coords):
    """The three expected rows, built term by term from short names."""
    out = set()
    for s1, s2, s3 in catalog.FIVE_VAR_WEIGHTS:
        terms = {"CE": 1, "C": -1, "CD": 1, "D": -1, "BE": 1, "B": -1, "BD": 1, "AD": 1,
                 "BCD": -s1, "AE": -s2, "ABC": s3}
        row = [0] * (len(coords) + 1)
        for name, k in terms.items():
            row[coords.index("H(" + ",".join(name) + ")")] += k
        out.add(normalize_row(row))
    return out


def five_var_samples(rng, count):
    vs = tuple(catalog.FIVE_VAR.nodes)
    for i in range(count):
        cards = tuple(rng.choice((2, 2, 3)) for _ in vs)
        p = random_table(vs, rng, cards=cards, zero_prob=rng.choice((0.0, 0.3, 0.7, 0.9)))
        if i % 2:
            # glue the ABCD and ABCE marginals: D and E independent given ABC
            p = adhesive_glue(marginalize(p, "ABCD"), marginalize(p, "ABCE"))
        yield p


def test_criterion_04_five_variable_rows(record_property):
    s, t_con = expensive.five_var_constrained()
    u, t_unc = expensive.five_var_unconstrained()
    vs = tuple(catalog.FIVE_VAR.nodes)
    rows = non_shannon_rows(s, vs)
    got = {normalize_row(r) for r in rows}
    record_property("detail", f"{len(s.ineqs)} rows, {len(rows)} non-Shannon; "
                              f"{t_con:.0f} s with the constraint vs {t_unc:.0f} s without")
    assert got == five_var_expected(s.coords)
    # non-redundant: none follows from the remaining rows
    for r in rows:
        rest = LinIneqSystem(s.coords, tuple(x for x in s.ineqs if normalize_row(x) != normalize_row(r)), s.eqs)
        assert not implies(rest, r)
    # no entropic sample violates them
    rng = random.Random(29)
    for p in five_var_samples(rng, 300):
        h = entropy_vector(p).point(s.coords)
        for r in rows:
            assert sum(float(a) * x for a, x in zip(r, h)) >= float(r[-1]) - 1e-9
    assert t_con < t_unc


def test_criterion_05_bell33_rays(record_property):
    rep, dt = expensive.bell33_report()
    out, total = rep.outside["cliques[0]"]
    # every ray of the intersection lies in each triangulated projection
    space = EntropyCoordSpace(tuple(catalog.BELL33.nodes))
    gamma = shannon_cone(space.variables)
    rays = enumerate_rays(rep.systems["cliques"])
    inside = all(in_projection(gamma.with_rows(eqs=ci_hyperplanes(t.ci, space)), dict(zip(rep.coords, r)))
                 for t in rep.triangulations for r in rays)
    record_property("detail", f"{out} of {total} rays outside Pi(Gamma), expected 108 of 217; "
                              f"intersection rays inside each Pi(Gamma_T): {inside}; {dt:.0f} s")
    assert inside
    assert total == 217
    assert out == 108


def test_criterion_06_classify(record_property):
    t = time.perf_counter()
    v11, v12 = classify(catalog.M1, catalog.G1), classify(catalog.M1, catalog.G2)
    v21 = classify(catalog.M2, catalog.G1)
    vic = classify(catalog.IC_SCENARIO, catalog.IC_DAG)
    dt = time.perf_counter() - t
    record_property("detail", f"{dt:.2f} s total")
    assert (v11.case, v12.case, v21.case, vic.case) == ("i", "i", "ii", "iii")
    assert CiStatement("A", "C", "B") in v21.witnesses and CiStatement("C", "D", "B") in v21.witnesses
    assert CiStatement(("X0",), ("Y0",), ("M",)) in vic.witnesses
    assert CiStatement(("X1",), ("Y1",), ("M",)) in vic.witnesses
    assert dt < 10


def test_criterion_07_information_causality(record_property):
    from test_pipeline import ic_rows, rowset

    t = time.perf_counter()
    g = entropic_characterize_causal(catalog.IC_SCENARIO, catalog.IC_DAG)
    tri = entropic_characterize(catalog.IC_SCENARIO)
    dt = time.perf_counter() - t
    extra = rowset(tri) - ic_rows(tri.coords, False)
    record_property("detail", f"{len(g.ineqs)} rows with I(G); with I(T) the six rows plus H(M) >= 0; {dt:.1f} s")
    assert rowset(g) == ic_rows(g.coords, True)
    assert ic_rows(tri.coords, False) <= rowset(tri)
    # besides the six rows only H(M) >= 0, the edge {M} on its own
    assert extra == {tuple(1 if c == "H(M)" else 0 for c in tri.coords) + (0,)}
    assert dt < 60


def test_criterion_08_vorobev(record_property):
    from test_distributions import test_vorobev_suite

    t = time.perf_counter()
    test_vorobev_suite()
    record_property("detail", f"1000 cases, {time.perf_counter() - t:.1f} s")


def test_criterion_09_polyhedra(record_property):
    import test_polyhedra as tp

    t = time.perf_counter()
    rng = random.Random(9)
    probes = sum(tp.fm_case(rng) for _ in range(500))
    tp.test_dd_roundtrip_from_facets()
    tp.test_dd_roundtrip_from_rays()
    tp.test_redundancy_suite()
    record_property("detail", f"500 FM systems / {probes} probes, DD round trips, "
                              f"redundancy probes, {time.perf_counter() - t:.1f} s")
    assert probes >= 500


def test_criterion_10_shannon_counts(record_property):
    got = [len(shannon_cone("ABCDEF"[:n]).ineqs) for n in range(1, 7)]
    record_property("detail", f"{got}")
    assert got == [2 ** (n - 2) * comb(n, 2) + n if n >= 2 else n for n in range(1, 7)]
    assert got == [shannon_row_count(n) for n in range(1, 7)]


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-q", "-p", "no:cacheprovider"]))

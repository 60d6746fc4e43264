"""Worked examples that take minutes; results shared with the acceptance run."""
from fractions import Fraction

from adhesive import catalog
from adhesive.pipeline import non_shannon_rows
from adhesive.polyhedra import enumerate_rays

import expensive
from oracles import polymatroid_gap, polymatroid_min


def label_mask(label, variables):
    inner = [v for v in label[2:-1].split(",") if v]
    return sum(1 << variables.index(v) for v in inner)


def test_bell33_ray_counts():
    rep, _ = expensive.bell33_report()
    variables = sorted(catalog.BELL33.nodes)
    masks = [label_mask(c, variables) for c in rep.coords]
    assert len(rep.triangulations) == 2
    for i in range(2):
        rays = enumerate_rays(rep.systems[f"cliques[{i}]"])
        # float LP on hand-written polymatroid rows, ray scaled to unit max entry
        gaps = [polymatroid_gap(6, {m: float(Fraction(x) / max(abs(y) for y in r)) for m, x in zip(masks, r)})
                for r in rays]
        assert not any(1e-9 < g < 1e-6 for g in gaps), "undecided ray"
        oracle_out = sum(g > 1e-6 for g in gaps)
        # frozen count: 90 of 217 on both triangulations (see README)
        assert rep.outside[f"cliques[{i}]"] == (oracle_out, len(rays)) == (90, 217)


def test_bell33_lattice_equal():
    rep, _ = expensive.bell33_report()
    assert rep.relation("triangulated", "shannon").relation == "equal"
    assert rep.relation("shannon", "cliques").relation == "equal"


def test_five_variable_rows_not_shannon_by_float_oracle():
    s, _ = expensive.five_var_constrained()
    variables = sorted(catalog.FIVE_VAR.nodes)
    masks = [label_mask(c, variables) for c in s.coords]
    flagged = {tuple(r) for r in non_shannon_rows(s, variables)}
    assert len(flagged) == 3
    for r in s.ineqs:
        obj = {}
        for m, a in zip(masks, r[:-1]):
            obj[m] = obj.get(m, 0.0) + float(a)
        low = polymatroid_min(5, obj)
        assert abs(low) > 1e-9 or low == 0.0
        assert (low < -1e-9) == (tuple(r) in flagged)

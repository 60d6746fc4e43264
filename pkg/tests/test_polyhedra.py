import json
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from adhesive.polyhedra import (LinIneqSystem, contains_ray, enumerate_rays, equivalent, fm_eliminate,
                                implies, in_cone_hull, in_projection, intersect, is_feasible,
                                lp_remove_redundant, optimize, rref, system_from_rays)
from adhesive.polyhedra.lp import solve_standard

from oracles import float_margin, rank

COORDS = tuple(f"x{i}" for i in range(10))


def random_system(rng, dim, rows, *, eq_prob=0.15, span=3, homogeneous=False):
    ineqs, eqs = [], []
    for _ in range(rows):
        r = [rng.randint(-span, span) for _ in range(dim)] + [0 if homogeneous else rng.randint(-span, span)]
        if not any(r[:-1]):
            continue
        (eqs if rng.random() < eq_prob else ineqs).append(r)
    return LinIneqSystem(COORDS[:dim], tuple(ineqs), tuple(eqs))


def substitute(system, fixed):
    """Rows over the remaining coordinates after fixing some of them."""
    pos = {system.coords.index(c): Fraction(v) for c, v in fixed.items()}
    rest = [j for j in range(system.dim) if j not in pos]

    def sub(r):
        return [r[j] for j in rest] + [r[-1] - sum(r[j] * v for j, v in pos.items())]

    return [sub(r) for r in system.ineqs], [sub(r) for r in system.eqs], len(rest)


# -- examples ------------------------------------------------------------------------


def test_row_normalization_and_text():
    s = LinIneqSystem(("a", "b"), ((Fraction(1, 2), Fraction(-1, 3), 0),), ((-2, 4, 6),))
    assert s.ineqs == ((3, -2, 0),)
    assert s.eqs == ((1, -2, -3),)
    assert s.to_text() == "a - 2*b = -3\n3*a - 2*b >= 0\n"
    assert LinIneqSystem.from_json(json.loads(json.dumps(s.to_json()))) == s


def test_zero_rows():
    s = LinIneqSystem(("a",), ((0, 1),))
    assert s.infeasible
    assert LinIneqSystem(("a",), ((0, -1),)).ineqs == ()


def test_fm_triangle_projection():
    # x >= 0, y >= 0, x + y <= 1 projected to x: 0 <= x <= 1
    s = LinIneqSystem(("x", "y"), ((1, 0, 0), (0, 1, 0), (-1, -1, -1)))
    p = fm_eliminate(s, ["y"])
    assert p.coords == ("x",)
    assert set(p.ineqs) == {(1, 0), (-1, -1)}
    assert [s.split()[1] for s in p.meta["elimination_order"]] == ["y"]


def test_fm_uses_equalities():
    s = LinIneqSystem(("x", "y", "z"), ((1, 0, 0, 0),), ((1, -1, 0, 0), (0, 1, -1, 0)))
    p = fm_eliminate(s, ["y"])
    assert equivalent(p, LinIneqSystem(("x", "z"), ((1, 0, 0),), ((1, -1, 0),)))


def test_fm_rejects_unknown_coordinate():
    with pytest.raises(ValueError):
        fm_eliminate(LinIneqSystem(("x",), ((1, 0),)), ["y"])


def test_redundancy_examples():
    s = LinIneqSystem(("x", "y"), ((1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 0, -5)))
    r = lp_remove_redundant(s)
    assert set(r.ineqs) == {(1, 0, 0), (0, 1, 0)}
    # x >= 0 and -x >= 0 becomes the equality x = 0
    e = lp_remove_redundant(LinIneqSystem(("x", "y"), ((1, 0, 0), (-1, 0, 0), (0, 1, 0))))
    assert e.eqs == ((1, 0, 0),) and e.ineqs == ((0, 1, 0),)
    bad = lp_remove_redundant(LinIneqSystem(("x",), ((1, 1), (-1, 0))))
    assert bad.infeasible


def test_intersect_examples():
    s = LinIneqSystem(("x", "y"), ((1, 0, 0), (0, 1, 0)))
    assert equivalent(intersect([s, s]), s)
    with pytest.raises(ValueError):
        intersect([s, LinIneqSystem(("x", "z"), ())])


def test_lp_statuses():
    s = LinIneqSystem(("x", "y"), ((1, 0, 0), (0, 1, 0), (-1, -1, -4)))
    res = optimize(s, (1, 2), maximize=True)
    assert res.status == "optimal" and res.value == 8
    assert optimize(s, (-1, 0), maximize=True).status == "optimal"
    assert optimize(LinIneqSystem(("x",), ((1, 0),)), (1,), maximize=True).status == "unbounded"
    assert not is_feasible(LinIneqSystem(("x",), ((1, 1), (-1, 0))))
    r = solve_standard([[1, 1]], [-1], duals=True)
    assert r.status == "infeasible" and r.farkas is not None


def test_rays_of_orthant_and_guard():
    s = LinIneqSystem(("a", "b", "c"), ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)))
    assert sorted(enumerate_rays(s)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert contains_ray(s, (1, 2, 3)) and not contains_ray(s, (1, -1, 0))
    with pytest.raises(ValueError):
        enumerate_rays(LinIneqSystem(("a", "b"), ((1, 0, 0),)))
    from adhesive.polyhedra import DimensionGuard
    with pytest.raises(DimensionGuard):
        enumerate_rays(LinIneqSystem(COORDS[:3], ((1, 0, 0, 0),)), max_dim=2)


def test_rays_of_simple_cone():
    s = LinIneqSystem(("x", "y"), ((1, 1, 0), (1, -1, 0)))
    assert sorted(enumerate_rays(s)) == [(1, -1), (1, 1)]


# -- property suites ---------------------------------------------------------------


def fm_case(rng):
    dim = rng.randint(2, 6)
    s = random_system(rng, dim, rng.randint(2, 9))
    drop = rng.sample(s.coords, rng.randint(1, dim - 1))
    p = fm_eliminate(s, drop)
    keep = [c for c in s.coords if c not in drop]
    assert p.coords == tuple(keep)
    probes = [{c: rng.randint(-3, 3) for c in keep} for _ in range(6)]
    probes += [{c: Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for c in keep} for _ in range(2)]
    # points known to be inside: projections of feasible points
    from adhesive.polyhedra import feasible_point
    x = feasible_point(s)
    if x is not None:
        probes.append({c: v for c, v in zip(s.coords, x) if c in keep})
    checked = 0
    for pt in probes:
        lifted = in_projection(s, pt)
        assert p.contains([pt[c] for c in keep]) == lifted
        checked += 1
    return checked


def test_fm_lp_suite():
    """Five hundred random systems, each probed at several points."""
    rng = random.Random(9)
    total = sum(fm_case(rng) for _ in range(500))
    assert total >= 500 * 6


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fm_agrees_with_float_oracle(seed):
    rng = random.Random(seed)
    dim = rng.randint(2, 5)
    s = random_system(rng, dim, rng.randint(3, 8), eq_prob=0.0)
    drop = rng.sample(s.coords, rng.randint(1, dim - 1))
    p = fm_eliminate(s, drop)
    keep = [c for c in s.coords if c not in drop]
    for _ in range(5):
        pt = {c: rng.randint(-3, 3) for c in keep}
        ineqs, eqs, n = substitute(s, pt)
        if n == 0 or not ineqs:
            continue
        t = float_margin(ineqs, eqs, n)
        if t is None or abs(t) < 1e-6:
            continue
        assert p.contains([pt[c] for c in keep]) == (t > 0)


def random_pointed_cone(rng, dim):
    rows = [tuple(1 if j == i else 0 for j in range(dim)) + (0,) for i in range(dim)]
    for _ in range(rng.randint(0, 4)):
        r = [rng.randint(-2, 3) for _ in range(dim)]
        if any(r):
            rows.append(tuple(r) + (0,))
    return LinIneqSystem(COORDS[:dim], tuple(rows))


def test_dd_roundtrip_from_facets():
    rng = random.Random(4)
    for _ in range(60):
        dim = rng.randint(1, 10)
        s = random_pointed_cone(rng, dim)
        rays = enumerate_rays(s)
        for r in rays:
            assert contains_ray(s, r)
            tight = [row[:-1] for row in s.ineqs if sum(a * x for a, x in zip(row, r)) == 0]
            tight += [row[:-1] for row in s.eqs]
            assert rank(tight, dim) == dim - 1
        back = system_from_rays(s.coords, rays)
        assert equivalent(back, s)


def test_dd_roundtrip_from_rays():
    rng = random.Random(5)
    for _ in range(60):
        dim = rng.randint(2, 8)
        gens = [tuple(rng.randint(0, 3) for _ in range(dim)) for _ in range(rng.randint(1, 8))]
        gens = [g for g in gens if any(g)] or [(1,) * dim]
        s = system_from_rays(COORDS[:dim], gens)
        for g in gens:
            assert contains_ray(s, g)
        rays = enumerate_rays(s)
        for r in rays:
            assert in_cone_hull(gens, r)
        # each extreme ray is one of the generators up to scaling
        for r in rays:
            assert any(rank([r, g], dim) == 1 and sum(a * b for a, b in zip(r, g)) > 0 for g in gens)


def test_redundancy_suite():
    """Random systems padded with implied rows; membership before and after
    agrees on five hundred probes and no kept row is implied by the others."""
    rng = random.Random(6)
    probes = 0
    while probes < 500:
        dim = rng.randint(1, 5)
        s = random_system(rng, dim, rng.randint(2, 7), eq_prob=0.1)
        extra = []
        for _ in range(rng.randint(0, 4)):
            if len(s.ineqs) < 2:
                break
            a, b = rng.sample(s.ineqs, 2)
            la, lb = rng.randint(1, 3), rng.randint(1, 3)
            extra.append(tuple(la * x + lb * y for x, y in zip(a, b))[:-1] + (la * a[-1] + lb * b[-1] - rng.randint(0, 2),))
        s = s.with_rows(ineqs=extra)
        r = lp_remove_redundant(s)
        for _ in range(10):
            pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(dim)]
            assert s.contains(pt) == r.contains(pt)
            probes += 1
        if not r.infeasible:
            assert equivalent(r, s)
            for i, row in enumerate(r.ineqs):
                rest = LinIneqSystem(r.coords, r.ineqs[:i] + r.ineqs[i + 1:], r.eqs)
                assert not implies(rest, row)
        else:
            assert not is_feasible(s)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_redundancy_keeps_solution_set(seed):
    rng = random.Random(seed)
    s = random_system(rng, rng.randint(1, 4), rng.randint(1, 8))
    r = lp_remove_redundant(s)
    for _ in range(10):
        pt = [rng.randint(-4, 4) for _ in range(s.dim)]
        assert s.contains(pt) == r.contains(pt)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_feasibility_agrees_with_float_oracle(seed):
    rng = random.Random(seed)
    s = random_system(rng, rng.randint(1, 5), rng.randint(2, 9), eq_prob=0.0)
    t = float_margin(list(s.ineqs), [], s.dim)
    if t is None or abs(t) < 1e-6:
        return
    assert is_feasible(s) == (t > 0)


def test_rref_basic():
    rows, piv = rref([(2, 4, 6), (1, 2, 3), (0, 1, 1)], 2)
    assert len(rows) == 2 and list(piv) == [0, 1]

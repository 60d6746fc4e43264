"""Probability route: simplex polytopes, marginal maps and Bell inequalities.

Observable coordinates are raw probabilities ``p(A1=0,B1=1)``, one per
outcome of every scenario edge (edge variables sorted, outcomes row-major).
A correlator view for binary outcomes is offered as a change of basis.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .hypergraph import (GuardExceeded, Hypergraph, maximal_cliques_chordal, minimal_triangulation,
                         rio_ordering, two_section)
from .polyhedra import LinIneqSystem, fm_eliminate

DEFAULT_MAX_OUTCOMES = 4096


def prob_label(variables: Sequence[str], outcome: Sequence[int]) -> str:
    return "p(" + ",".join(f"{v}={o}" for v, o in zip(variables, outcome)) + ")"


def _cards_for(nodes, cards: Mapping | None) -> dict:
    cards = dict(cards or {})
    out = {}
    for v in nodes:
        c = int(cards.get(v, 2))
        if c < 2:
            raise ValueError(f"cardinality of {v} must be at least 2")
        out[v] = c
    return out


def _outcomes(variables, cards):
    return list(product(*(range(cards[v]) for v in variables)))


def _check_guard(count, max_outcomes):
    if count > max_outcomes:
        raise GuardExceeded(f"{count} joint outcomes exceed the bound {max_outcomes}")


class ProbCoordSpace:
    """Observable probability coordinates of a marginal scenario."""

    def __init__(self, scenario: Hypergraph, cards: Mapping | None = None):
        self.scenario = scenario
        self.cards = _cards_for(scenario.nodes, cards)
        self.blocks = []  # (edge variables, outcomes)
        coords = []
        for e in scenario.edge_list:
            outs = _outcomes(e, self.cards)
            self.blocks.append((e, outs))
            coords.extend(prob_label(e, o) for o in outs)
        self.coords = tuple(coords)

    def __len__(self):
        return len(self.coords)


def joint_coords(variables: Sequence[str], cards: Mapping) -> tuple:
    vs = sorted(variables)
    return tuple(prob_label(vs, o) for o in _outcomes(vs, cards))


def simplex_system(variables: Sequence[str], cards: Mapping | None = None, *,
                   max_outcomes: int = DEFAULT_MAX_OUTCOMES) -> LinIneqSystem:
    """Nonnegativity of every joint outcome plus normalization."""
    vs = sorted(variables)
    cards = _cards_for(vs, cards)
    _check_guard(math.prod(cards[v] for v in vs), max_outcomes)
    coords = joint_coords(vs, cards)
    n = len(coords)
    ineqs = [tuple(1 if j == i else 0 for j in range(n)) + (0,) for i in range(n)]
    return LinIneqSystem(coords, tuple(ineqs), ((1,) * n + (1,),))


def marginal_map(variables: Sequence[str], scenario: Hypergraph, cards: Mapping | None = None,
                 *, prefix: str = "") -> tuple:
    """Equalities ``p(M, o) = sum of joint coordinates consistent with o``.

    Returns ``(coords, rows)`` over the coordinates ``observable + joint``;
    ``prefix`` renames the joint coordinates (used for clique-local copies).
    """
    vs = sorted(variables)
    missing = set(scenario.nodes) - set(vs)
    if missing:
        raise ValueError(f"scenario nodes not among the joint variables: {sorted(missing)}")
    cards = _cards_for(vs, cards)
    obs = ProbCoordSpace(scenario, cards)
    joint = [prefix + c for c in joint_coords(vs, cards)]
    jouts = _outcomes(vs, cards)
    coords = tuple(obs.coords) + tuple(joint)
    no = len(obs.coords)
    rows = []
    k = 0
    for e, outs in obs.blocks:
        pos = [vs.index(v) for v in e]
        for o in outs:
            r = [0] * (len(coords) + 1)
            r[k] = 1
            for jj, jo in enumerate(jouts):
                if all(jo[p] == x for p, x in zip(pos, o)):
                    r[no + jj] = -1
            rows.append(tuple(r))
            k += 1
    return coords, rows


def _direct_system(scenario, cards, max_outcomes):
    vs = list(scenario.nodes)
    simplex = simplex_system(vs, cards, max_outcomes=max_outcomes)
    # joint coordinates get a prefix so an edge covering every node does
    # not collide with its observable copy
    simplex = LinIneqSystem(tuple("joint:" + c for c in simplex.coords), simplex.ineqs, simplex.eqs)
    coords, eqs = marginal_map(vs, scenario, cards, prefix="joint:")
    sys_ = simplex.embed(coords).with_rows(eqs=eqs)
    return sys_, list(simplex.coords)


def _clique_system(scenario, cards, max_outcomes, triangulation=None):
    """One simplex per clique of an acyclic extension, glued along the
    running-intersection separators, with the observables read off the
    first clique that contains each edge."""
    cards = _cards_for(scenario.nodes, cards)
    if triangulation is None:
        triangulation = maximal_cliques_chordal(minimal_triangulation(two_section(scenario)))
    order = rio_ordering(triangulation)
    if order is None:
        raise ValueError("triangulation hypergraph is not acyclic")
    obs = ProbCoordSpace(scenario, cards)
    cliques = [tuple(sorted(c)) for c in order.edges]
    local = []
    for k, c in enumerate(cliques):
        _check_guard(math.prod(cards[v] for v in c), max_outcomes)
        local.append([f"q{k}:" + lab for lab in joint_coords(c, cards)])
    coords = tuple(obs.coords) + tuple(x for block in local for x in block)
    idx = {c: i for i, c in enumerate(coords)}
    n = len(coords)
    ineqs, eqs = [], []

    def marg_terms(k, sub, o):
        c = cliques[k]
        pos = [c.index(v) for v in sub]
        return [local[k][jj] for jj, jo in enumerate(_outcomes(c, cards))
                if all(jo[p] == x for p, x in zip(pos, o))]

    for k, c in enumerate(cliques):
        for lab in local[k]:
            r = [0] * (n + 1)
            r[idx[lab]] = 1
            ineqs.append(r)
        r = [0] * (n + 1)
        for lab in local[k]:
            r[idx[lab]] = 1
        r[-1] = 1
        eqs.append(r)
        sep = sorted(order.separators[k])
        if sep:
            parent = order.parents[k]
            for o in _outcomes(sep, cards):
                r = [0] * (n + 1)
                for lab in marg_terms(k, sep, o):
                    r[idx[lab]] += 1
                for lab in marg_terms(parent, sep, o):
                    r[idx[lab]] -= 1
                eqs.append(r)
    for e, outs in obs.blocks:
        k = next(i for i, c in enumerate(cliques) if set(e) <= set(c))
        for o in outs:
            r = [0] * (n + 1)
            r[idx[prob_label(e, o)]] = 1
            for lab in marg_terms(k, e, o):
                r[idx[lab]] -= 1
            eqs.append(r)
    sys_ = LinIneqSystem(coords, tuple(map(tuple, ineqs)), tuple(map(tuple, eqs)))
    return sys_, [x for block in local for x in block]


def bell_project(scenario: Hypergraph, mode: str = "via_triangulation", *, cards: Mapping | None = None,
                 triangulation: Hypergraph | None = None, max_outcomes: int = DEFAULT_MAX_OUTCOMES,
                 prune_threshold: int | None = None) -> LinIneqSystem:
    """Facets of the local (classical) polytope in observable coordinates.

    ``direct`` projects the simplex of the full joint distribution;
    ``via_triangulation`` projects clique-local simplices coupled along an
    acyclic extension, which describes the same set because consistent
    clique marginals always glue into a joint distribution.
    """
    if mode == "direct":
        sys_, drop = _direct_system(scenario, cards, max_outcomes)
    elif mode == "via_triangulation":
        sys_, drop = _clique_system(scenario, cards, max_outcomes, triangulation)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    kw = {} if prune_threshold is None else {"prune_threshold": prune_threshold}
    out = fm_eliminate(sys_, drop, **kw)
    meta = dict(out.meta)
    meta["mode"] = mode
    return LinIneqSystem(out.coords, out.ineqs, out.eqs, out.infeasible, meta)


def deterministic_points(scenario: Hypergraph, cards: Mapping | None = None) -> list:
    """Observable vectors of all deterministic assignments (integer 0/1)."""
    space = ProbCoordSpace(scenario, cards)
    nodes = list(scenario.nodes)
    pts = []
    for a in product(*(range(space.cards[v]) for v in nodes)):
        val = dict(zip(nodes, a))
        pt = []
        for e, outs in space.blocks:
            pt.extend(1 if all(val[v] == x for v, x in zip(e, o)) else 0 for o in outs)
        pts.append(tuple(pt))
    return pts


# -- correlator presentation (binary outcomes) ---------------------------------------


def correlator_coords(scenario: Hypergraph) -> tuple:
    """``<A1>``, ``<A1B1>``... for every nonempty subset of every edge."""
    subs = set()
    for e in scenario.edge_list:
        for r in range(1, len(e) + 1):
            for mask in range(1, 1 << len(e)):
                s = tuple(v for i, v in enumerate(e) if mask >> i & 1)
                subs.add(s)
    return tuple("<" + "".join(s) + ">" for s in sorted(subs, key=lambda s: (len(s), s)))


def to_correlators(system: LinIneqSystem, scenario: Hypergraph) -> LinIneqSystem:
    """Rewrite a system in observable probabilities over ``+-1`` correlators.

    Uses ``p(M, o) = 2^-|M| sum_T (-1)^(sum of o over T) <T>`` with ``<()> = 1``
    and a single correlator per variable subset (consistent marginals).
    Rows that become trivial, such as the consistency equalities, vanish.
    """
    space = ProbCoordSpace(scenario)
    if any(c != 2 for c in space.cards.values()):
        raise ValueError("correlator form needs binary outcomes")
    ccoords = correlator_coords(scenario)
    cidx = {c: i for i, c in enumerate(ccoords)}
    expand = {}
    for e, outs in space.blocks:
        for o in outs:
            vec = [Fraction(0)] * (len(ccoords) + 1)
            scale = Fraction(1, 2 ** len(e))
            for mask in range(1 << len(e)):
                t = tuple(v for i, v in enumerate(e) if mask >> i & 1)
                sign = -1 if sum(o[i] for i in range(len(e)) if mask >> i & 1) % 2 else 1
                if t:
                    vec[cidx["<" + "".join(t) + ">"]] += sign * scale
                else:
                    vec[-1] += sign * scale  # constant term
            expand[prob_label(e, o)] = vec
    missing = [c for c in system.coords if c not in expand]
    if missing:
        raise ValueError(f"coordinates outside the scenario: {missing[:3]}")

    def conv(r):
        out = [Fraction(0)] * (len(ccoords) + 1)
        for c, a in zip(system.coords, r):
            if a:
                vec = expand[c]
                for k in range(len(ccoords)):
                    out[k] += a * vec[k]
                out[-1] -= a * vec[-1]  # move constant to the right-hand side
        out[-1] += r[-1]
        return out

    ineqs = [conv(r) for r in system.ineqs]
    eqs = [conv(r) for r in system.eqs]
    return LinIneqSystem(ccoords, tuple(ineqs), tuple(eqs), system.infeasible).canonical()

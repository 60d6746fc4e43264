"""Top-level procedures.

* triangulation of a marginal scenario and the CI sets of its acyclic extensions,
* entropic characterization (Shannon cone + CI hyperplanes + projection),
* the distinguishability classifier comparing a causal structure with the
  constraints a scenario's triangulations impose,
* the lattice of outer approximations and its inclusion certificates.
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .causal import CiSet, CiStatement, ci_set_dag, ci_set_mrf, ci_subset
from .entropy_cone import (EntropyCoordSpace, ci_hyperplanes, clique_cone_embedded, coords_from_names,
                           marginal_coords, reduced_shannon_cone, shannon_cone)
from .hypergraph import (DEFAULT_MAX_NODES, Digraph, Graph, GuardExceeded, Hypergraph, clique_hypergraph,
                         enumerate_minimal_triangulations, two_section)
from .polyhedra import (LinIneqSystem, contains_ray, enumerate_rays, fm_eliminate, implies, in_projection,
                        intersect, optimize)

log = logging.getLogger(__name__)

DEFAULT_MAX_VARS = 7
# projections of the full (unconstrained or CI-constrained) Shannon cone are
# only attempted up to these sizes inside approximation_report
DEFAULT_TRIANGULATED_MAX_VARS = 5
DEFAULT_FULL_MAX_VARS = 4
# entropic projections prune redundant rows earlier than the polyhedra default;
# on the five- and six-variable examples this halves the running time
ENTROPIC_PRUNE_THRESHOLD = 600


class CaseIIIRejection(ValueError):
    """Combining the scenario's and the structure's CI constraints is invalid."""

    def __init__(self, msg, verdict=None):
        super().__init__(msg)
        self.verdict = verdict


# -- triangulation -------------------------------------------------------------


class ScenarioTriangulation(NamedTuple):
    graph: Graph  # the chordal supergraph of the 2-section
    hypergraph: Hypergraph  # its clique hypergraph
    ci: CiSet  # separation statements of the chordal graph over the scenario nodes
    fill: tuple  # added edges


class TriangulationList(list):
    """List of ``ScenarioTriangulation``; ``truncated`` is set when a cap cut it short."""

    truncated = False


def triangulate_scenario(m: Hypergraph, *, max_nodes: int = DEFAULT_MAX_NODES,
                         cap: int | None = None) -> TriangulationList:
    """All minimal triangulations of ``[m]_2`` with their clique hypergraphs
    and Markov-field CI sets, fewest fill edges first."""
    g = two_section(m)
    res = enumerate_minimal_triangulations(g, cap=cap, max_nodes=max_nodes)
    items = []
    for t in res.graphs:
        fill = tuple(sorted(tuple(sorted(e)) for e in t.edges - g.edges))
        items.append(ScenarioTriangulation(t, clique_hypergraph(t), ci_set_mrf(t, m.nodes), fill))
    items.sort(key=lambda x: (len(x.fill), x.fill))
    out = TriangulationList(items)
    out.truncated = res.truncated
    return out


# -- provenance ------------------------------------------------------------------


def scenario_hash(m: Hypergraph) -> str:
    payload = json.dumps({"nodes": list(m.nodes), "edges": [list(e) for e in m.edge_list]})
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _with_provenance(system: LinIneqSystem, m: Hypergraph, route: str, ci: Iterable = (),
                     orders: Sequence = (), **extra) -> LinIneqSystem:
    meta = {
        "route": route,
        "scenario": [list(e) for e in m.edge_list],
        "scenario_hash": scenario_hash(m),
        "ci": [str(s) for s in sorted(ci)],
        "elimination_order": [list(o) for o in orders],
    }
    meta.update(extra)
    return LinIneqSystem(system.coords, system.ineqs, system.eqs, system.infeasible, meta)


def render(system: LinIneqSystem, fmt: str = "text") -> str:
    """Text with ``#`` provenance header, or JSON with a ``provenance`` key."""
    meta = dict(system.meta)
    if fmt == "json":
        return json.dumps({"provenance": meta, "system": system.to_json()}, indent=2)
    head = []
    if "route" in meta:
        head.append(f"# route: {meta['route']}")
    if "scenario" in meta:
        head.append("# scenario: " + " ".join("{" + ",".join(e) + "}" for e in meta["scenario"]))
        head.append(f"# scenario-hash: {meta['scenario_hash']}")
    if meta.get("ci"):
        shown = meta["ci"] if len(meta["ci"]) <= 12 else meta["ci"][:12] + [f"... {len(meta['ci'])} total"]
        head.append("# ci: " + "; ".join(shown))
    for o in meta.get("elimination_order", ()):
        head.append("# elimination-order: " + ", ".join(o))
    for k in sorted(meta):
        if k not in ("route", "scenario", "scenario_hash", "ci", "elimination_order"):
            head.append(f"# {k}: {meta[k]}")
    return "\n".join(head) + ("\n" if head else "") + system.to_text()


# -- entropic projections ---------------------------------------------------------


def _keep_coords(m: Hypergraph, space: EntropyCoordSpace, coords) -> tuple:
    if coords is None:
        return marginal_coords(m, space)
    keep = coords_from_names(coords) if not isinstance(coords, tuple) or not all(
        c.startswith("H(") for c in coords) else coords
    unknown = [c for c in keep if c not in space.coords]
    if unknown:
        raise ValueError(f"coordinates outside the entropy space: {unknown}")
    return tuple(keep)


def entropic_projection(variables: Sequence[str], ci: Iterable[CiStatement], keep: Sequence[str], *,
                        prune_threshold: int | None = None) -> LinIneqSystem:
    """``Pi_keep(Gamma ∩ L_ci)`` using the reduced Shannon axioms.  ``keep``
    holds entropy labels or compact names such as ``AD``."""
    ci = sorted(set(ci))
    base = reduced_shannon_cone(variables, ci)
    keep = tuple(k if k.startswith("H(") else coords_from_names([k])[0] for k in keep)
    unknown = [k for k in keep if k not in base.coords]
    if unknown:
        raise ValueError(f"coordinates outside the entropy space: {unknown}")
    keep_set = set(keep)
    drop = [c for c in base.coords if c not in keep_set]
    out = fm_eliminate(base, drop, prune_threshold=prune_threshold or ENTROPIC_PRUNE_THRESHOLD)
    order = {c: i for i, c in enumerate(keep)}
    coords = tuple(sorted(out.coords, key=order.__getitem__))
    return out.embed(coords)


def _check_vars(variables, max_vars):
    if len(variables) > max_vars:
        raise GuardExceeded(f"{len(variables)} variables exceed the entropic bound {max_vars}")


def entropic_characterize(m: Hypergraph, extra_ci: CiSet | Iterable[CiStatement] | None = None, *,
                          coords=None, which: Sequence[int] | None = None, structure=None,
                          max_vars: int = DEFAULT_MAX_VARS, max_nodes: int = DEFAULT_MAX_NODES,
                          prune_threshold: int | None = None) -> LinIneqSystem:
    """Intersection over the chosen triangulations of ``Pi_M(Gamma ∩ L_T ∩ L_extra)``.

    ``structure`` (a DAG or Markov field) supplies ``extra_ci`` from its CI
    set; if the classifier puts the pair in the inconsistent case the
    combination is refused with ``CaseIIIRejection``.
    """
    if structure is not None:
        verdict = classify(m, structure, max_nodes=max_nodes)
        if verdict.case == "iii":
            raise CaseIIIRejection("the structure's and the scenario's CI sets are mutually inconsistent; "
                                   "combining them yields neither an inner nor an outer approximation",
                                   verdict)
        full = structure_ci(structure)
        extra_ci = full if extra_ci is None else _as_ci(extra_ci).union(full)
    extra = list(_as_ci(extra_ci)) if extra_ci is not None else []
    variables = sorted(set(m.nodes).union(*(s.nodes for s in extra)) if extra else m.nodes)
    _check_vars(variables, max_vars)
    space = EntropyCoordSpace(tuple(variables))
    keep = _keep_coords(m, space, coords)
    tris = triangulate_scenario(m, max_nodes=max_nodes)
    chosen = range(len(tris)) if which is None else which
    parts, orders, cis = [], [], set(extra)
    for i in chosen:
        ci = set(tris[i].ci.statements) | set(extra)
        cis |= ci
        part = entropic_projection(variables, ci, keep, prune_threshold=prune_threshold)
        parts.append(part)
        orders.append(part.meta.get("elimination_order", ()))
    out = parts[0] if len(parts) == 1 else intersect(parts)
    return _with_provenance(out, m, "entropic", cis, orders, triangulations=list(chosen),
                            partial=bool(tris.truncated))


def _as_ci(ci) -> CiSet:
    if isinstance(ci, CiSet):
        return ci
    sts = [CiStatement.parse(s) if isinstance(s, str) else s for s in ci]
    return CiSet(sts, set().union(*(s.nodes for s in sts)) if sts else ())


def structure_ci(g, universe: Iterable[str] | None = None) -> CiSet:
    """CI set of a DAG (d-separation) or Markov field (graph separation)."""
    if isinstance(g, Digraph):
        return ci_set_dag(g, universe)
    if isinstance(g, Graph):
        return ci_set_mrf(g, universe)
    raise TypeError("causal structure must be a Digraph or a Graph")


def entropic_characterize_causal(m: Hypergraph, g, *, combine: bool = False, coords=None,
                                 max_vars: int = DEFAULT_MAX_VARS, max_nodes: int = DEFAULT_MAX_NODES,
                                 prune_threshold: int | None = None) -> LinIneqSystem:
    """Entropic constraints on the scenario's marginals implied by ``g``.

    In the unfalsifiable case the triangulation constraints of the witness
    triangulation are used; otherwise the structure's full CI set (latent
    nodes included).  In the inconsistent case the scenario's triangulation
    constraints are withheld, and asking to ``combine`` them raises
    ``CaseIIIRejection``.
    """
    verdict = classify(m, g, max_nodes=max_nodes)
    if verdict.case == "i":
        out = entropic_characterize(m, coords=coords, which=[verdict.index], max_vars=max_vars,
                                    max_nodes=max_nodes, prune_threshold=prune_threshold)
        meta = dict(out.meta, route="entropic-causal", case="i")
        return LinIneqSystem(out.coords, out.ineqs, out.eqs, out.infeasible, meta)
    if combine:
        return entropic_characterize(m, structure=g, coords=coords, max_vars=max_vars,
                                     max_nodes=max_nodes, prune_threshold=prune_threshold)
    full = structure_ci(g)
    variables = sorted(set(g.nodes) | set(m.nodes))
    _check_vars(variables, max_vars)
    space = EntropyCoordSpace(tuple(variables))
    keep = _keep_coords(m, space, coords)
    out = entropic_projection(variables, full, keep, prune_threshold=prune_threshold)
    return _with_provenance(out, m, "entropic-causal", full, [out.meta.get("elimination_order", ())],
                            case=verdict.case)


def non_shannon_rows(system: LinIneqSystem, variables: Sequence[str]) -> list:
    """Inequalities of an entropic system not implied by the Shannon cone of
    ``variables`` (exact LP; equivalently not implied by ``Pi(Gamma)``)."""
    full = shannon_cone(variables)
    lifted = system.embed(full.coords)
    return [r for r, lr in zip(system.ineqs, lifted.ineqs) if not implies(full, lr)]


# -- distinguishability ------------------------------------------------------------


@dataclass(frozen=True)
class DistinguishabilityVerdict:
    case: str  # "i", "ii" or "iii"
    witnesses: tuple  # CI statements certifying the case
    guidance: str
    index: int | None = None  # witness triangulation (case i) or the j of case iii
    counter_witnesses: tuple = ()  # case iii: statements of I(T_j) outside I(G)
    partial: bool = False  # triangulation enumeration was truncated
    g_in_t: tuple = ()  # I(G) <= I(T_i) per triangulation
    t_in_g: tuple = ()  # I(T_i) <= I(G) per triangulation
    g_minus_t: tuple = ()  # per triangulation: statements of I(G) missing from I(T_i)
    t_minus_g: tuple = ()
    triangulations: tuple = ()

    def summary(self) -> str:
        lines = [f"case ({self.case}){' [partial]' if self.partial else ''}: {self.guidance}"]
        for i, t in enumerate(self.triangulations):
            lines.append(f"  T{i}: {t!r}  I(G)<=I(T): {self.g_in_t[i]}  I(T)<=I(G): {self.t_in_g[i]}")
        if self.witnesses:
            lines.append("  witnesses: " + "; ".join(map(str, _maximal(self.witnesses))))
        if self.counter_witnesses:
            lines.append("  counter-witnesses: " + "; ".join(map(str, _maximal(self.counter_witnesses))))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "case": self.case, "guidance": self.guidance, "index": self.index, "partial": self.partial,
            "witnesses": [str(s) for s in self.witnesses],
            "counter_witnesses": [str(s) for s in self.counter_witnesses],
            "g_in_t": list(self.g_in_t), "t_in_g": list(self.t_in_g),
            "triangulations": [[list(e) for e in t.edge_list] for t in self.triangulations],
        }


def _maximal(sts) -> list:
    sts = list(sts)
    if not sts:
        return []
    return CiSet(sts, set().union(*(s.nodes for s in sts))).maximal()


GUIDANCE = {
    "i": "the marginals cannot falsify the structure; characterize with the triangulation constraints alone",
    "ii": "the triangulation constraints are implied; project with the structure's CI set directly",
    "iii": "the two CI sets are mutually inconsistent; do not combine them, project with the structure's CI set alone",
}


def classify(m: Hypergraph, g, *, max_nodes: int = DEFAULT_MAX_NODES,
             cap: int | None = None) -> DistinguishabilityVerdict:
    """Compare ``I(G)`` restricted to the scenario nodes with every ``I(T_i)``.

    First match in the order (i) some ``I(G) <= I(T_i)``; (ii) every
    ``I(T_i) <= I(G)``; (iii) otherwise.  The raw inclusion data is kept.
    """
    missing = set(m.nodes) - set(g.nodes)
    if missing:
        raise ValueError(f"structure lacks scenario nodes {sorted(missing)}")
    tris = triangulate_scenario(m, max_nodes=max_nodes, cap=cap)
    gci = structure_ci(g, m.nodes)
    g_in_t, t_in_g, gmt, tmg = [], [], [], []
    for t in tris:
        ok, miss = ci_subset(gci, t.ci)
        g_in_t.append(ok)
        gmt.append(tuple(miss))
        ok, miss = ci_subset(t.ci, gci)
        t_in_g.append(ok)
        tmg.append(tuple(miss))
    common = dict(partial=bool(tris.truncated), g_in_t=tuple(g_in_t), t_in_g=tuple(t_in_g),
                  g_minus_t=tuple(gmt), t_minus_g=tuple(tmg),
                  triangulations=tuple(t.hypergraph for t in tris))
    # witnesses: (i) I(G), all inside I(T_i); (ii) the I(T_i), all inside I(G);
    # (iii) statements of I(G) that no triangulation has
    if any(g_in_t):
        i = g_in_t.index(True)
        return DistinguishabilityVerdict("i", tuple(sorted(gci.statements)), GUIDANCE["i"], i, **common)
    if all(t_in_g):
        inside = set().union(*(t.ci.statements for t in tris))
        return DistinguishabilityVerdict("ii", tuple(sorted(inside)), GUIDANCE["ii"], **common)
    never = set(gmt[0]).intersection(*map(set, gmt[1:])) if gmt else set()
    j = t_in_g.index(False)
    return DistinguishabilityVerdict("iii", tuple(sorted(never)), GUIDANCE["iii"], j, tmg[j], **common)


# -- outer approximations -------------------------------------------------------------


def clique_projection(m: Hypergraph, cliques: Iterable[Iterable[str]], keep: Sequence[str], *,
                      prune_threshold: int | None = None) -> LinIneqSystem:
    """``Pi_M(∩_k Gamma_{C_k})``: Shannon cones of the cliques only."""
    space = EntropyCoordSpace(tuple(m.nodes))
    parts = [clique_cone_embedded(c, space) for c in cliques]
    base = LinIneqSystem(space.coords, tuple(r for p in parts for r in p.ineqs), parts[0].eqs)
    keep_set = set(keep)
    out = fm_eliminate(base, [c for c in base.coords if c not in keep_set],
                       prune_threshold=prune_threshold or ENTROPIC_PRUNE_THRESHOLD)
    order = {c: i for i, c in enumerate(keep)}
    return out.embed(tuple(sorted(out.coords, key=order.__getitem__)))


class _Member:
    """One lattice member: an explicit system when affordable, otherwise
    only lifted systems whose projections intersect to it."""

    def __init__(self, name, keep, lifted, system=None):
        self.name, self.keep, self.lifted, self.system = name, keep, lifted, system
        self._rays = None

    @property
    def rays(self):
        if self._rays is None and self.system is not None:
            self._rays = enumerate_rays(self.system)
        return self._rays

    def contains(self, ray) -> bool:
        if self.system is not None:
            return contains_ray(self.system, ray)
        pt = dict(zip(self.keep, ray))
        return all(in_projection(s, pt) for s in self.lifted)


class Relation(NamedTuple):
    smaller: str
    larger: str
    relation: str  # "equal", "strict" or "unknown"
    certificate: object  # violating ray/point of the larger member, or None
    forward_checked: bool  # inclusion smaller <= larger verified explicitly


@dataclass
class ApproximationReport:
    scenario: Hypergraph
    coords: tuple
    triangulations: list
    systems: dict  # "triangulated", "shannon", "cliques" and per-triangulation entries; None if skipped
    relations: list
    outside: dict = field(default_factory=dict)  # "cliques[i]" -> (rays outside Pi(Gamma), total rays)
    skipped: dict = field(default_factory=dict)

    def relation(self, smaller, larger) -> Relation:
        return next(r for r in self.relations if r.smaller == smaller and r.larger == larger)

    def summary(self) -> str:
        lines = [f"scenario {self.scenario!r}, {len(self.coords)} coordinates, "
                 f"{len(self.triangulations)} triangulation(s)"]
        for k, s in self.systems.items():
            lines.append(f"  {k}: " + ("skipped (" + self.skipped.get(k, "") + ")" if s is None else
                                       f"{len(s.ineqs)} inequalities, {len(s.eqs)} equalities"))
        for k, (out, tot) in self.outside.items():
            lines.append(f"  {k}: {out} of {tot} extremal rays outside Pi(Gamma)")
        for r in self.relations:
            sym = {"equal": "=", "strict": "⊊", "unknown": "?"}[r.relation]
            lines.append(f"  {r.smaller} {sym} {r.larger}" + ("" if r.forward_checked else "  (inclusion by construction)"))
        return "\n".join(lines)


def _strict_point(system: LinIneqSystem, lifted: LinIneqSystem, keep) -> tuple | None:
    """A point of ``Pi_keep(lifted)`` violating some row of ``system``, or
    ``None`` if every row is implied."""
    idx = [lifted.coords.index(c) for c in keep]
    # slice the cone so that minimization is bounded
    norm = [0] * (lifted.dim + 1)
    for j in idx:
        norm[j] = 1
    norm[-1] = 1
    sliced = lifted.with_rows(eqs=[tuple(norm)])
    emb = system.embed(lifted.coords)
    for r in emb.ineqs:
        res = optimize(sliced, r[:-1])
        if res.status == "optimal" and res.value < r[-1]:
            return tuple(res.x[j] for j in idx)
    return None


def approximation_report(m: Hypergraph, *, coords=None, max_nodes: int = DEFAULT_MAX_NODES,
                         triangulated_max_vars: int = DEFAULT_TRIANGULATED_MAX_VARS,
                         full_max_vars: int = DEFAULT_FULL_MAX_VARS, triangulated: LinIneqSystem | None = None,
                         prune_threshold: int | None = None) -> ApproximationReport:
    """Members ``∩_i Pi(Gamma_{T_i}) ⊆ Pi(Gamma) ⊆ ∩_i Pi(∩_k Gamma_{C_k^i})`` and
    certificates for how they relate.

    Members larger than the size bounds are not projected; they are probed
    through exact lifted LPs instead.  A precomputed ``triangulated`` system
    may be supplied.
    """
    variables = tuple(m.nodes)
    space = EntropyCoordSpace(variables)
    keep = _keep_coords(m, space, coords)
    tris = triangulate_scenario(m, max_nodes=max_nodes)
    n = len(variables)
    systems, skipped, outside = {}, {}, {}

    gamma = shannon_cone(variables)
    lifted_t = [gamma.with_rows(eqs=ci_hyperplanes(t.ci, space)) for t in tris]
    clique_lifted = []
    cl_parts = []
    for i, t in enumerate(tris):
        cl = clique_projection(m, t.hypergraph.edge_list, keep, prune_threshold=prune_threshold)
        systems[f"cliques[{i}]"] = cl
        cl_parts.append(cl)
        parts = [clique_cone_embedded(c, space) for c in t.hypergraph.edge_list]
        clique_lifted.append(LinIneqSystem(space.coords, tuple(r for p in parts for r in p.ineqs), parts[0].eqs))
    cliques = _Member("cliques", keep, clique_lifted, cl_parts[0] if len(cl_parts) == 1 else intersect(cl_parts))
    systems["cliques"] = cliques.system

    shannon_sys = None
    if n <= full_max_vars:
        shannon_sys = entropic_projection(variables, (), keep, prune_threshold=prune_threshold)
    else:
        skipped["shannon"] = f"{n} variables > {full_max_vars}"
    shannon = _Member("shannon", keep, [gamma], shannon_sys)
    systems["shannon"] = shannon_sys

    tri_sys = triangulated
    if tri_sys is None and n <= triangulated_max_vars:
        parts = [entropic_projection(variables, t.ci, keep, prune_threshold=prune_threshold) for t in tris]
        tri_sys = parts[0] if len(parts) == 1 else intersect(parts)
    elif tri_sys is None:
        skipped["triangulated"] = f"{n} variables > {triangulated_max_vars}"
    tri = _Member("triangulated", keep, lifted_t, tri_sys)
    systems["triangulated"] = tri_sys

    for i in range(len(tris)):
        cl = _Member(f"cliques[{i}]", keep, [clique_lifted[i]], systems[f"cliques[{i}]"])
        rays = cl.rays
        outside[f"cliques[{i}]"] = (sum(1 for r in rays if not shannon.contains(r)), len(rays))

    def forward(small, large):
        if small.system is None:
            return False
        return all(large.contains(r) for r in small.rays) or _fail(small, large)

    def compare(small, large):
        fwd = forward(small, large)
        if large.system is not None:
            bad = next((r for r in large.rays if not small.contains(r)), None)
            return Relation(small.name, large.name, "strict" if bad else "equal", bad, fwd)
        if small.system is not None and len(large.lifted) == 1:
            pt = _strict_point(small.system, large.lifted[0], keep)
            return Relation(small.name, large.name, "strict" if pt else "equal", pt, fwd)
        return Relation(small.name, large.name, "unknown", None, fwd)

    rel_sc = compare(shannon, cliques)
    rel_ts = compare(tri, shannon)
    if rel_ts.relation == "unknown" and cliques.rays is not None:
        # sandwich: if every ray of the largest member lies in the smallest, all coincide
        bad = next((r for r in cliques.rays if not tri.contains(r)), None)
        if bad is None:
            rel_ts = rel_ts._replace(relation="equal")
    if rel_ts.relation == "equal" and rel_sc.relation == "equal":
        rel_tc = Relation("triangulated", "cliques", "equal", None, rel_ts.forward_checked or rel_sc.forward_checked)
    elif "strict" in (rel_ts.relation, rel_sc.relation):
        cert = rel_sc.certificate if rel_sc.relation == "strict" else rel_ts.certificate
        rel_tc = Relation("triangulated", "cliques", "strict", cert, False)
    else:
        rel_tc = compare(tri, cliques)
    return ApproximationReport(m, keep, list(tris), systems, [rel_ts, rel_sc, rel_tc], outside, skipped)


def _fail(small, large):
    log.error("inclusion %s <= %s failed on an extremal ray", small.name, large.name)
    return False

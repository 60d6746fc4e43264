"""Command line front end: ``python -m adhesive <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import catalog
from .causal import CiStatement
from .corr_polytope import bell_project, to_correlators
from .distributions import InconsistentMarginals
from .hypergraph import Digraph, Graph, GuardExceeded, Hypergraph
from .pipeline import (CaseIIIRejection, approximation_report, classify, entropic_characterize,
                       entropic_characterize_causal, non_shannon_rows, render, triangulate_scenario,
                       _with_provenance)
from .polyhedra import DimensionGuard, equivalent

EXIT_OK, EXIT_GUARD, EXIT_CASE3, EXIT_INPUT = 0, 2, 3, 4


class InputError(ValueError):
    pass


def _names(item):
    if isinstance(item, str):
        return [v for v in item.split(",") if v] if "," in item else list(item)
    return list(item)


def load_scenario(path) -> tuple:
    """``(hypergraph, cards)`` from JSON: a list of edges or
    ``{"edges": [...], "cards": {...}, "nodes": [...]}``; an edge is a list
    of names or a string (comma separated, else one character per name)."""
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, list):
        data = {"edges": data}
    try:
        edges = [_names(e) for e in data["edges"]]
        return Hypergraph(edges, data.get("nodes")), dict(data.get("cards", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad scenario file {path}: {exc}") from exc


def load_structure(dag=None, mrf=None):
    path = dag or mrf
    if path is None:
        return None
    with open(path) as fh:
        data = json.load(fh)
    try:
        if dag:
            return Digraph(data.get("nodes", ()), [tuple(a) for a in data["arcs"]])
        return Graph(data.get("nodes", ()), [tuple(e) for e in data["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad structure file {path}: {exc}") from exc


def _emit(text, args):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _coords(args):
    return [c.strip() for c in args.coords.split(";" if ";" in args.coords else " ") if c.strip()] \
        if getattr(args, "coords", None) else None


# -- subcommands -----------------------------------------------------------------


def cmd_triangulate(args):
    m, _ = load_scenario(args.scenario)
    tris = triangulate_scenario(m, max_nodes=args.max_nodes)
    if args.format == "json":
        _emit(json.dumps({"truncated": tris.truncated, "triangulations": [
            {"cliques": [list(e) for e in t.hypergraph.edge_list], "fill": [list(e) for e in t.fill],
             "ci": [str(s) for s in t.ci.maximal()]} for t in tris]}, indent=2), args)
        return EXIT_OK
    lines = []
    for i, t in enumerate(tris):
        lines.append(f"T{i}: {t.hypergraph!r}  fill: {[''.join(e) for e in t.fill]}")
        lines.extend(f"    {s}" for s in t.ci.maximal())
    if tris.truncated:
        lines.append("# enumeration truncated")
    _emit("\n".join(lines), args)
    return EXIT_OK


def cmd_classify(args):
    m, _ = load_scenario(args.scenario)
    g = load_structure(args.dag, args.mrf)
    if g is None:
        raise InputError("classify needs --dag or --mrf")
    v = classify(m, g, max_nodes=args.max_nodes)
    _emit(json.dumps(v.to_json(), indent=2) if args.format == "json" else v.summary(), args)
    return EXIT_OK


def cmd_derive_entropic(args):
    m, _ = load_scenario(args.scenario)
    g = load_structure(args.dag, args.mrf)
    extra = [CiStatement.parse(s) for s in args.ci] if args.ci else None
    if g is not None:
        s = entropic_characterize_causal(m, g, combine=args.combine, coords=_coords(args))
    else:
        s = entropic_characterize(m, extra, coords=_coords(args))
    _emit(render(s, args.format), args)
    return EXIT_OK


def cmd_derive_prob(args):
    m, cards = load_scenario(args.scenario)
    s = bell_project(m, args.mode, cards=cards)
    s = _with_provenance(s, m, f"probability/{args.mode}", (), [s.meta.get("elimination_order", ())])
    if args.correlators:
        c = to_correlators(s, m)
        s = type(s)(c.coords, c.ineqs, c.eqs, c.infeasible, dict(s.meta, basis="correlators"))
    _emit(render(s, args.format), args)
    return EXIT_OK


def cmd_report(args):
    m, _ = load_scenario(args.scenario)
    rep = approximation_report(m, coords=_coords(args), max_nodes=args.max_nodes)
    _emit(rep.summary(), args)
    return EXIT_OK


# -- reproductions of the worked examples -------------------------------------------


def _repro_chsh():
    out = []
    systems = {}
    for mode in ("direct", "via_triangulation"):
        t = time.time()
        systems[mode] = bell_project(catalog.CHSH, mode)
        out.append(f"{mode}: {len(systems[mode].ineqs)} facets, {len(systems[mode].eqs)} equalities "
                   f"({time.time() - t:.2f}s)")
    out.append(f"modes equivalent: {equivalent(systems['direct'], systems['via_triangulation'])}")
    out.append(to_correlators(systems["via_triangulation"], catalog.CHSH).to_text())
    return "\n".join(out)


def _repro_five_var():
    t = time.time()
    s = entropic_characterize(catalog.FIVE_VAR, catalog.FIVE_VAR_CI, coords=catalog.FIVE_VAR_COORDS)
    rows = non_shannon_rows(s, catalog.FIVE_VAR.nodes)
    lines = [f"{len(s.ineqs)} inequalities ({time.time() - t:.1f}s); {len(rows)} not implied by Shannon:"]
    lines += ["  " + s.format_row(r) for r in rows]
    return "\n".join(lines)


def _repro_bell33():
    rep = approximation_report(catalog.BELL33)
    return rep.summary()


def _repro_classify(m, g):
    def run():
        return classify(m, g).summary()
    return run


def _repro_ic():
    v = classify(catalog.IC_SCENARIO, catalog.IC_DAG)
    a = entropic_characterize_causal(catalog.IC_SCENARIO, catalog.IC_DAG)
    b = entropic_characterize(catalog.IC_SCENARIO)
    return "\n".join([v.summary(), "", "with I(G):", a.to_text(), "with I(T):", b.to_text()])


REPRODUCTIONS = {
    "chsh": _repro_chsh,
    "eq29": _repro_five_var,
    "bell33": _repro_bell33,
    "m1g1": _repro_classify(catalog.M1, catalog.G1),
    "m2g1": _repro_classify(catalog.M2, catalog.G1),
    "infocausality": _repro_ic,
}


def cmd_reproduce(args):
    _emit(REPRODUCTIONS[args.example](), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adhesive", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log elimination progress")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, structure=False, coords=False):
        sp.add_argument("--scenario", required=True, help="scenario JSON file")
        if structure:
            grp = sp.add_mutually_exclusive_group()
            grp.add_argument("--dag", help="DAG JSON file {nodes, arcs}")
            grp.add_argument("--mrf", help="Markov field JSON file {nodes, edges}")
        if coords:
            sp.add_argument("--coords", help="projection coordinates, e.g. 'B C AD ABC'")
        sp.add_argument("--max-nodes", type=int, default=12)
        sp.add_argument("--jobs", type=int, default=1, help="accepted for compatibility; runs sequentially")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--out")

    sp = sub.add_parser("triangulate", help="minimal triangulations and their CI sets")
    common(sp)
    sp.set_defaults(func=cmd_triangulate)
    sp = sub.add_parser("classify", help="distinguishability case of a causal structure")
    common(sp, structure=True)
    sp.set_defaults(func=cmd_classify)
    sp = sub.add_parser("derive-entropic", help="entropic inequalities on the scenario marginals")
    common(sp, structure=True, coords=True)
    sp.add_argument("--ci", action="append", help="extra CI statement 'A,B _|_ C | D' (repeatable)")
    sp.add_argument("--combine", action="store_true",
                    help="with --dag/--mrf: also impose the triangulation constraints")
    sp.set_defaults(func=cmd_derive_entropic)
    sp = sub.add_parser("derive-prob", help="Bell inequalities of the correlation polytope")
    common(sp)
    sp.add_argument("--mode", choices=("direct", "via_triangulation"), default="via_triangulation")
    sp.add_argument("--correlators", action="store_true", help="binary outcomes: print in correlator basis")
    sp.set_defaults(func=cmd_derive_prob)
    sp = sub.add_parser("report", help="outer approximation lattice with certificates")
    common(sp, coords=True)
    sp.set_defaults(func=cmd_report)
    sp = sub.add_parser("reproduce", help="rerun a worked example")
    sp.add_argument("example", choices=sorted(REPRODUCTIONS))
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(relativeCreated)8d ms %(message)s")
    try:
        return args.func(args)
    except (GuardExceeded, DimensionGuard) as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except CaseIIIRejection as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_CASE3
    except (InputError, InconsistentMarginals, OSError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Conditional-independence semantics of DAGs and Markov random fields.

CI sets are compared literally: a statement belongs to ``I(G)`` iff the
separation oracle certifies it, and ``I(G1) <= I(G2)`` is plain set inclusion
of the exhaustively enumerated canonical statements.  No graphoid closure is
applied.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable

from .hypergraph import Digraph, Graph, GuardExceeded

DEFAULT_MAX_CI_NODES = 10


@dataclass(frozen=True, order=True)
class CiStatement:
    """``(A _|_ B | C)``; stored canonically with ``a <= b``."""

    a: tuple
    b: tuple
    c: tuple = ()

    def __post_init__(self):
        a, b, c = (tuple(sorted(set(x))) for x in (self.a, self.b, self.c))
        if not a or not b:
            raise ValueError("A and B must be nonempty")
        if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
            raise ValueError("A, B, C must be pairwise disjoint")
        if b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def parse(cls, text: str) -> "CiStatement":
        """Parse ``"A,B _|_ C | D"`` (``|`` part optional, ``_|_`` or ``⟂``)."""
        t = text.replace("⟂", "_|_").replace("⊥", "_|_")
        left, sep, rest = t.partition("_|_")
        if not sep:
            raise ValueError(f"not a CI statement: {text!r}")
        right, _, cond = rest.partition("|")

        def names(s):
            return [x.strip() for x in s.replace(" ", ",").split(",") if x.strip()]

        return cls(tuple(names(left)), tuple(names(right)), tuple(names(cond)))

    @property
    def nodes(self) -> frozenset:
        return frozenset(self.a) | frozenset(self.b) | frozenset(self.c)

    def __str__(self):
        s = f"({','.join(self.a)} _|_ {','.join(self.b)}"
        return s + (f" | {','.join(self.c)})" if self.c else ")")

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "c": list(self.c)}


@dataclass(frozen=True)
class CiSet:
    statements: frozenset
    universe: tuple

    def __init__(self, statements: Iterable[CiStatement], universe: Iterable[str]):
        st = frozenset(statements)
        uni = tuple(sorted(set(universe)))
        bad = [s for s in st if not s.nodes <= set(uni)]
        if bad:
            raise ValueError(f"statement outside the universe: {min(bad)}")
        object.__setattr__(self, "statements", st)
        object.__setattr__(self, "universe", uni)

    def __len__(self):
        return len(self.statements)

    def __iter__(self):
        return iter(sorted(self.statements))

    def __contains__(self, st):
        if isinstance(st, str):
            st = CiStatement.parse(st)
        return st in self.statements

    def restrict(self, universe: Iterable[str]) -> "CiSet":
        """Statements whose nodes all lie in ``universe``."""
        u = set(universe)
        return CiSet((s for s in self.statements if s.nodes <= u), u)

    def union(self, other: "CiSet") -> "CiSet":
        return CiSet(self.statements | other.statements, set(self.universe) | set(other.universe))

    def maximal(self) -> list:
        """Statements not obtained from another one by shrinking A or B
        with the same C (a presentation aid only)."""
        out = []
        for s in self.statements:
            if not any(t != s and t.c == s.c and _covers(t, s) for t in self.statements):
                out.append(s)
        return sorted(out)

    def to_json(self) -> list:
        return [s.to_json() for s in sorted(self.statements)]

    @classmethod
    def from_json(cls, data, universe=None) -> "CiSet":
        if isinstance(data, str):
            data = json.loads(data)
        sts = [CiStatement(tuple(d["a"]), tuple(d["b"]), tuple(d.get("c", ()))) for d in data]
        uni = universe if universe is not None else set().union(*(s.nodes for s in sts)) if sts else ()
        return cls(sts, uni)


def _covers(t: CiStatement, s: CiStatement) -> bool:
    ta, tb, sa, sb = set(t.a), set(t.b), set(s.a), set(s.b)
    return (sa <= ta and sb <= tb) or (sa <= tb and sb <= ta)


# -- DAG utilities ---------------------------------------------------------------


def is_dag(d: Digraph) -> bool:
    indeg = {v: 0 for v in d.nodes}
    for _, v in d.arcs:
        indeg[v] += 1
    stack = [v for v, k in indeg.items() if k == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in d.children(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == len(d.nodes)


def _require_dag(d: Digraph):
    if not is_dag(d):
        raise ValueError("digraph has a directed cycle")


def _check_triple(nodes, a, b, c):
    a, b, c = set(a), set(b), set(c)
    if not a or not b:
        raise ValueError("a and b must be nonempty")
    if a & b or a & c or b & c:
        raise ValueError("a, b, c must be pairwise disjoint")
    unknown = (a | b | c) - set(nodes)
    if unknown:
        raise ValueError(f"unknown nodes {sorted(unknown)}")
    return a, b, c


def _active_reach(d: Digraph, source, c: set) -> set:
    """Nodes joined to ``source`` by a trail that is active given ``c``.

    Walks (node, direction) states: "up" means the trail arrived from a child,
    "down" from a parent.  A collider passes only if it or a descendant is in
    ``c``; a non-collider passes only if it is not in ``c``.
    """
    parents = {v: d.parents(v) for v in d.nodes}
    children = {v: d.children(v) for v in d.nodes}
    # ancestors of c (inclusive): exactly the colliders that are opened
    anc = set()
    stack = list(c)
    while stack:
        v = stack.pop()
        if v in anc:
            continue
        anc.add(v)
        stack.extend(parents[v])
    reach = set()
    visited = set()
    todo = [(source, "up")]
    while todo:
        v, direction = todo.pop()
        if (v, direction) in visited:
            continue
        visited.add((v, direction))
        if v not in c:
            reach.add(v)
        if direction == "up" and v not in c:
            todo.extend((p, "up") for p in parents[v])
            todo.extend((ch, "down") for ch in children[v])
        elif direction == "down":
            if v not in c:
                todo.extend((ch, "down") for ch in children[v])
            if v in anc:
                todo.extend((p, "up") for p in parents[v])
    reach.discard(source)
    return reach


def d_separated(d: Digraph, a, b, c=()) -> bool:
    _require_dag(d)
    a, b, c = _check_triple(d.nodes, a, b, c)
    return all(not (_active_reach(d, x, c) & b) for x in a)


def _graph_reach(adj: dict, source, c: set) -> set:
    seen = {source}
    stack = [source]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in c and u not in seen:
                seen.add(u)
                stack.append(u)
    seen.discard(source)
    return seen


def moral_graph(d: Digraph) -> Graph:
    _require_dag(d)
    edges = {frozenset(a) for a in d.arcs}
    for v in d.nodes:
        ps = sorted(d.parents(v))
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                edges.add(frozenset((ps[i], ps[j])))
    return Graph(d.nodes, edges)


# -- CI enumeration ----------------------------------------------------------------


def _enumerate(universe, reach_for: Callable[[set], dict], max_nodes: int) -> set:
    """All canonical (A, B, C) over ``universe`` with every a in A separated
    from every b in B given C.  ``reach_for(C)`` maps each node outside C to
    the set of nodes it is connected to given C."""
    uni = sorted(set(universe))
    n = len(uni)
    if n > max_nodes:
        raise GuardExceeded(f"CI enumeration over {n} nodes exceeds the bound {max_nodes}")
    out = set()
    for cmask in range(1 << n):
        c = {uni[i] for i in range(n) if cmask >> i & 1}
        rest = [v for v in uni if v not in c]
        reach = reach_for(c)
        # assign every remaining node to A (1), B (2) or neither (0)
        for labels in product((0, 1, 2), repeat=len(rest)):
            a = [v for v, t in zip(rest, labels) if t == 1]
            b = [v for v, t in zip(rest, labels) if t == 2]
            if not a or not b or tuple(b) < tuple(a):
                continue
            bs = set(b)
            if all(not (reach[x] & bs) for x in a):
                out.add(CiStatement(tuple(a), tuple(b), tuple(sorted(c))))
    return out


def ci_set_dag(d: Digraph, universe: Iterable[str] | None = None, *,
               max_nodes: int = DEFAULT_MAX_CI_NODES) -> CiSet:
    """Every d-separation statement among ``universe`` (default: all nodes).

    Separation is decided in the full DAG, so latent nodes outside the
    universe still shape the paths.
    """
    _require_dag(d)
    uni = d.nodes if universe is None else tuple(universe)
    unknown = set(uni) - set(d.nodes)
    if unknown:
        raise ValueError(f"unknown nodes {sorted(unknown)}")

    def reach_for(c):
        return {v: _active_reach(d, v, c) for v in uni if v not in c}

    return CiSet(_enumerate(uni, reach_for, max_nodes), uni)


def ci_set_mrf(g: Graph, universe: Iterable[str] | None = None, *,
               max_nodes: int = DEFAULT_MAX_CI_NODES) -> CiSet:
    """Every graph-separation statement among ``universe``."""
    uni = g.nodes if universe is None else tuple(universe)
    unknown = set(uni) - set(g.nodes)
    if unknown:
        raise ValueError(f"unknown nodes {sorted(unknown)}")
    adj = g.adjacency()

    def reach_for(c):
        return {v: _graph_reach(adj, v, c) for v in uni if v not in c}

    return CiSet(_enumerate(uni, reach_for, max_nodes), uni)


def ci_subset(s1: CiSet, s2: CiSet) -> tuple:
    """``(s1 <= s2, sorted s1 minus s2)``."""
    if s1.universe != s2.universe:
        raise ValueError(f"universe mismatch: {s1.universe} vs {s2.universe}")
    missing = sorted(s1.statements - s2.statements)
    return not missing, missing

"""Hypergraphs, graphs and triangulations.

Nodes are short string labels ordered lexicographically.  Edges are stored as
frozensets; every public listing uses the canonical form (sorted labels inside
an edge, edges sorted as label tuples) so results are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence


def _canon_edges(edges) -> tuple:
    return tuple(sorted(tuple(sorted(e)) for e in edges))


@dataclass(frozen=True)
class Hypergraph:
    """Node set plus a deduplicated family of nonempty node subsets.

    If ``nodes`` is omitted it is the union of the edges.
    """

    edges: frozenset
    nodes: tuple = field(default=None)

    def __init__(self, edges: Iterable[Iterable[str]], nodes: Iterable[str] | None = None):
        es = frozenset(frozenset(e) for e in edges)
        if any(not e for e in es):
            raise ValueError("hyperedges must be nonempty")
        covered = set().union(*es) if es else set()
        ns = tuple(sorted(set(nodes))) if nodes is not None else tuple(sorted(covered))
        if not covered <= set(ns):
            raise ValueError("edge mentions a node outside the node set")
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "nodes", ns)

    @property
    def edge_list(self) -> tuple:
        return _canon_edges(self.edges)

    @property
    def is_reduced(self) -> bool:
        return not any(e < f for e in self.edges for f in self.edges)

    def __repr__(self):
        return "Hypergraph(" + ", ".join("".join(e) if all(len(v) == 1 for v in e) else "{" + ",".join(e) + "}"
                                         for e in self.edge_list) + ")"

    def components(self) -> list:
        """Edge sets of the connected components, in canonical order."""
        remaining = set(self.edges)
        comps = []
        while remaining:
            start = min(remaining, key=lambda e: tuple(sorted(e)))
            comp, frontier = {start}, [start]
            remaining.discard(start)
            while frontier:
                e = frontier.pop()
                touching = [f for f in remaining if f & e]
                for f in touching:
                    remaining.discard(f)
                    comp.add(f)
                    frontier.append(f)
            comps.append(comp)
        return sorted(comps, key=lambda c: _canon_edges(c))


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph."""

    nodes: tuple
    edges: frozenset

    def __init__(self, nodes: Iterable[str], edges: Iterable[Iterable[str]] = ()):
        es = set()
        for e in edges:
            e = frozenset(e)
            if len(e) != 2:
                raise ValueError(f"graph edge must join two distinct nodes: {sorted(e)}")
            es.add(e)
        ns = tuple(sorted(set(nodes) | set().union(*es) if es else set(nodes)))
        object.__setattr__(self, "nodes", ns)
        object.__setattr__(self, "edges", frozenset(es))

    @property
    def edge_list(self) -> tuple:
        return _canon_edges(self.edges)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.nodes}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def has_edge(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges

    def add_edges(self, extra) -> "Graph":
        return Graph(self.nodes, set(self.edges) | {frozenset(e) for e in extra})

    def __repr__(self):
        return f"Graph({list(self.nodes)}, {[list(e) for e in self.edge_list]})"


@dataclass(frozen=True)
class Digraph:
    """Directed graph; acyclicity is checked separately."""

    nodes: tuple
    arcs: frozenset

    def __init__(self, nodes: Iterable[str], arcs: Iterable[tuple] = ()):
        arcs = frozenset((u, v) for u, v in arcs)
        if any(u == v for u, v in arcs):
            raise ValueError("self-arcs are not allowed")
        ns = set(nodes)
        for u, v in arcs:
            ns.update((u, v))
        object.__setattr__(self, "nodes", tuple(sorted(ns)))
        object.__setattr__(self, "arcs", arcs)

    def parents(self, v) -> set:
        return {u for u, w in self.arcs if w == v}

    def children(self, v) -> set:
        return {w for u, w in self.arcs if u == v}

    def skeleton(self) -> Graph:
        return Graph(self.nodes, [(u, v) for u, v in self.arcs])


# -- basic constructions --------------------------------------------------------


def two_section(h: Hypergraph) -> Graph:
    """Graph joining every pair of nodes that share a hyperedge."""
    if not h.nodes:
        raise ValueError("empty hypergraph")
    edges = {frozenset(p) for e in h.edges for p in combinations(sorted(e), 2)}
    return Graph(h.nodes, edges)


def reduce(h: Hypergraph) -> Hypergraph:
    """Keep only inclusion-maximal edges."""
    return Hypergraph([e for e in h.edges if not any(e < f for f in h.edges)])


class GrahamStep(NamedTuple):
    op: str       # "node" or "edge"
    item: tuple   # the deleted node (1-tuple) or edge


def graham(h: Hypergraph) -> tuple:
    """Graham reduction.  Returns ``(is_acyclic, trace, residual)``.

    Step (a) deletes a node lying in exactly one edge, step (b) deletes an
    edge contained in another one (or a duplicate / emptied edge).  The
    residual is the edge family left when neither step applies.
    """
    edges = [frozenset(e) for e in h.edge_list]
    trace: list = []
    changed = True
    while changed:
        changed = False
        # (a) nodes in exactly one edge
        count: dict = {}
        for e in edges:
            for v in e:
                count[v] = count.get(v, 0) + 1
        lonely = sorted(v for v, c in count.items() if c == 1)
        for v in lonely:
            edges = [e - {v} if v in e else e for e in edges]
            trace.append(GrahamStep("node", (v,)))
            changed = True
        # (b) edges contained in another edge (empty edges included)
        keep = []
        for i, e in enumerate(edges):
            contained = not e or any(
                (e < f) or (e == f and j < i) for j, f in enumerate(edges) if j != i)
            if contained:
                trace.append(GrahamStep("edge", tuple(sorted(e))))
                changed = True
            else:
                keep.append(e)
        edges = keep
    residual = Hypergraph(edges) if edges else Hypergraph([])
    return not edges, trace, residual


def is_acyclic(h: Hypergraph) -> bool:
    return graham(h)[0]


def extends(small: Hypergraph, big: Hypergraph) -> bool:
    """True iff every edge of ``small`` lies inside some edge of ``big``."""
    return all(any(e <= f for f in big.edges) for e in small.edges)


# -- running intersection ------------------------------------------------------


@dataclass(frozen=True)
class RioOrdering:
    """Edges in running-intersection order with separators and residuals.

    ``separators[k]`` and ``residuals[k]`` belong to ``edges[k]``; the first
    edge of each connected component has an empty separator.
    """

    edges: tuple
    separators: tuple
    residuals: tuple
    parents: tuple  # index of an earlier edge containing the separator, or None

    def check(self) -> bool:
        seen = set()
        for k, e in enumerate(self.edges):
            s = e & seen
            if s != self.separators[k] or self.residuals[k] != e - s:
                return False
            p = self.parents[k]
            if s and (p is None or p >= k or not s <= self.edges[p]):
                return False
            seen |= e
        return True


def rio_ordering(h: Hypergraph, first: Iterable[str] | None = None) -> RioOrdering | None:
    """Running-intersection ordering, or ``None`` if ``h`` is cyclic.

    Uses maximum cardinality search on hyperedges (the next edge is the one
    sharing the most already-covered nodes, ties by canonical order) per
    connected component, then verifies the ordering.  ``first`` optionally
    fixes the starting edge.
    """
    edges = [frozenset(e) for e in h.edge_list]
    if not edges:
        return RioOrdering((), (), (), ())
    first = frozenset(first) if first is not None else None
    if first is not None and first not in edges:
        raise ValueError("first edge is not an edge of the hypergraph")
    order: list = []
    placed: set = set()
    comps = Hypergraph(edges).components()
    if first is not None:
        comps.sort(key=lambda c: first not in c)
    for comp in comps:
        comp = sorted(comp, key=lambda e: tuple(sorted(e)))
        start = first if first is not None and first in comp else comp[0]
        covered = set(start)
        order.append(start)
        rest = [e for e in comp if e != start]
        while rest:
            best = max(rest, key=lambda e: (len(e & covered), [-ord(c) for c in "".join(sorted(e))]))
            rest.remove(best)
            order.append(best)
            covered |= best
        placed |= covered
    seps, resid, parents = [], [], []
    seen: set = set()
    for k, e in enumerate(order):
        s = e & seen
        p = None
        if s:
            p = next((j for j in range(k) if s <= order[j]), None)
            if p is None:
                return None
        seps.append(frozenset(s))
        resid.append(frozenset(e - s))
        parents.append(p)
        seen |= e
    return RioOrdering(tuple(order), tuple(seps), tuple(resid), tuple(parents))


# -- chordal graphs ------------------------------------------------------------------


def mcs_order(g: Graph) -> list:
    """Maximum cardinality search visit order (ties: smallest label)."""
    adj = g.adjacency()
    weight = {v: 0 for v in g.nodes}
    order = []
    left = set(g.nodes)
    while left:
        v = min(left, key=lambda u: (-weight[u], u))
        order.append(v)
        left.discard(v)
        for u in adj[v]:
            if u in left:
                weight[u] += 1
    return order


def is_chordal(g: Graph) -> tuple:
    """``(chordal, peo)``; ``peo`` is a perfect elimination ordering or None."""
    peo = list(reversed(mcs_order(g)))
    return (True, peo) if is_perfect_elimination(g, peo) else (False, None)


def is_perfect_elimination(g: Graph, order: Sequence[str]) -> bool:
    adj = g.adjacency()
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [u for u in adj[v] if pos[u] > pos[v]]
        for a, b in combinations(later, 2):
            if b not in adj[a]:
                return False
    return True


def maximal_cliques_chordal(g: Graph) -> Hypergraph:
    """Clique hypergraph (maximal cliques) of a chordal graph."""
    ok, peo = is_chordal(g)
    if not ok:
        raise ValueError("graph is not chordal")
    adj = g.adjacency()
    pos = {v: i for i, v in enumerate(peo)}
    cands = [frozenset({v} | {u for u in adj[v] if pos[u] > pos[v]}) for v in peo]
    maximal = [c for c in set(cands) if not any(c < d for d in cands)]
    return Hypergraph(maximal, g.nodes)


def clique_hypergraph(g: Graph) -> Hypergraph:
    return maximal_cliques_chordal(g)


def separates(g: Graph, a: Iterable[str], b: Iterable[str], c: Iterable[str] = ()) -> bool:
    """True iff every path from ``a`` to ``b`` meets ``c``."""
    a, b, c = set(a), set(b), set(c)
    if not a or not b:
        raise ValueError("a and b must be nonempty")
    if a & b or a & c or b & c:
        raise ValueError("a, b, c must be pairwise disjoint")
    unknown = (a | b | c) - set(g.nodes)
    if unknown:
        raise ValueError(f"unknown nodes {sorted(unknown)}")
    adj = g.adjacency()
    seen = set(a)
    stack = list(a)
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u in c or u in seen:
                continue
            if u in b:
                return False
            seen.add(u)
            stack.append(u)
    return True


# -- triangulation ---------------------------------------------------------------


def _reach_below(adj, v, u, weight, unnumbered):
    """Is there a path v ~> u whose inner nodes are unnumbered with weight < w(u)?"""
    if u in adj[v]:
        return True
    wu = weight[u]
    seen = {v}
    stack = [x for x in adj[v] if x in unnumbered and x != u and weight[x] < wu]
    seen.update(stack)
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y == u:
                return True
            if y in seen or y not in unnumbered or weight[y] >= wu:
                continue
            seen.add(y)
            stack.append(y)
    return False


def minimal_triangulation(g: Graph) -> Graph:
    """MCS-M minimal triangulation.

    Among unnumbered vertices of maximal weight the largest label is chosen,
    so on the CHSH square the chord joins A1 and A2.
    """
    adj = g.adjacency()
    weight = {v: 0 for v in g.nodes}
    unnumbered = set(g.nodes)
    fill = set()
    while unnumbered:
        v = max(unnumbered, key=lambda x: (weight[x], x))
        unnumbered.discard(v)
        bump = [u for u in unnumbered if _reach_below(adj, v, u, weight, unnumbered)]
        for u in bump:
            weight[u] += 1
            if u not in adj[v]:
                fill.add(frozenset((u, v)))
    return g.add_edges(fill)


def fill_in(g: Graph, order: Sequence[str]) -> set:
    """Fill edges produced by eliminating vertices in ``order``."""
    adj = {v: set(n) for v, n in g.adjacency().items()}
    fill = set()
    for v in order:
        nb = list(adj[v])
        for x, y in combinations(nb, 2):
            if y not in adj[x]:
                adj[x].add(y)
                adj[y].add(x)
                fill.add(frozenset((x, y)))
        for x in nb:
            adj[x].discard(v)
        del adj[v]
    return fill


class Triangulations(NamedTuple):
    graphs: list
    truncated: bool


DEFAULT_MAX_NODES = 12


def enumerate_minimal_triangulations(g: Graph, cap: int | None = None, *,
                                     max_nodes: int = DEFAULT_MAX_NODES) -> Triangulations:
    """All minimal triangulations of a small graph.

    Every minimal triangulation is the elimination graph of some vertex
    ordering.  The graph left after eliminating a set ``S`` does not depend on
    the order inside ``S``, so orderings are explored as a walk over subsets,
    keeping at each subset only the inclusion-minimal fill sets seen so far
    (a superset can never complete to a strictly smaller fill).  The final
    fill sets are filtered to the inclusion-minimal ones.
    """
    n = len(g.nodes)
    if n > max_nodes:
        raise GuardExceeded(f"{n} nodes exceeds the enumeration bound {max_nodes}")
    nodes = list(g.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    base = [0] * n
    for e in g.edges:
        u, v = (idx[x] for x in e)
        base[u] |= 1 << v
        base[v] |= 1 << u

    def elim_graph(mask):
        """Adjacency among remaining vertices after eliminating ``mask``."""
        adj = []
        for v in range(n):
            if mask >> v & 1:
                adj.append(0)
                continue
            # vertices reachable from v through eliminated vertices
            reach, frontier = base[v], base[v] & mask
            seen = frontier
            while frontier:
                w = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                nb = base[w]
                reach |= nb
                new = nb & mask & ~seen
                seen |= new
                frontier |= new
            adj.append(reach & ~mask & ~(1 << v))
        return adj

    layers = {0: {frozenset()}}
    for _ in range(n):
        nxt: dict = {}
        for mask, fills in layers.items():
            adj = elim_graph(mask)
            for v in range(n):
                if mask >> v & 1:
                    continue
                nb = [u for u in range(n) if adj[v] >> u & 1]
                new = frozenset((min(x, y), max(x, y)) for x, y in combinations(nb, 2) if not adj[x] >> y & 1)
                key = mask | 1 << v
                bucket = nxt.setdefault(key, set())
                for f in fills:
                    bucket.add(f | new)
        for key, bucket in nxt.items():
            nxt[key] = {f for f in bucket if not any(o < f for o in bucket)}
        layers = nxt
    finals = layers[(1 << n) - 1] if n else {frozenset()}
    minimal = sorted({f for f in finals if not any(o < f for o in finals)},
                     key=lambda f: sorted(tuple(sorted((nodes[x], nodes[y]))) for x, y in f))
    graphs = [g.add_edges([(nodes[x], nodes[y]) for x, y in f]) for f in minimal]
    truncated = False
    if cap is not None and len(graphs) > cap:
        graphs, truncated = graphs[:cap], True
    return Triangulations(graphs, truncated)


class GuardExceeded(ValueError):
    """A size guard on an exponential enumeration was hit."""

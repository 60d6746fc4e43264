"""Shared generators for the test modules."""
from __future__ import annotations

import random

from adhesive.hypergraph import Hypergraph

NAMES = "ABCDE"


def random_acyclic(rng: random.Random, n: int):
    """Random acyclic hypergraph on ``n`` nodes built in running-intersection
    order.  Returns (hypergraph, edges in construction order)."""
    nodes = list(NAMES[:n])
    rng.shuffle(nodes)
    first = rng.randint(1, n)
    edges = [frozenset(nodes[:first])]
    used = first
    while used < n:
        j = rng.randrange(len(edges))
        parent = edges[j]
        k = rng.randint(0, len(parent))
        sep = frozenset(rng.sample(sorted(parent), k))
        fresh = frozenset(nodes[used:used + rng.randint(1, n - used)])
        used += len(fresh)
        if sep == parent:
            # would swallow the parent: grow it in place instead
            edges[j] = parent | fresh
        else:
            edges.append(sep | fresh)
    return Hypergraph(edges), edges


def entropic_ok(system, values, tol=1e-9) -> bool:
    """Float check of every row of ``system`` at entropy ``values``."""
    for r in system.ineqs:
        if sum(float(a) * v for a, v in zip(r[:-1], values)) < float(r[-1]) - tol * (1 + sum(abs(float(a)) for a in r[:-1])):
            return False
    for r in system.eqs:
        if abs(sum(float(a) * v for a, v in zip(r[:-1], values)) - float(r[-1])) > tol * 10:
            return False
    return True

"""Exact joint probability tables, adhesive gluing and global extensions.

Probabilities are ``Fraction``s throughout.  Entropies are floats in bits;
every zero test on a conditional mutual information goes through the exact
factorization ``P(abc) P(c) == P(ac) P(bc)`` instead.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .hypergraph import Hypergraph, graham, rio_ordering

ENTROPY_RTOL = 1e-9


class InconsistentMarginals(ValueError):
    """Two tables disagree on a shared sub-marginal."""

    def __init__(self, msg, outcome=None):
        super().__init__(msg)
        self.outcome = outcome


@dataclass(frozen=True)
class ProbTable:
    """Dense table over ``variables`` (names) with cardinalities ``cards``.

    ``probs`` is indexed row-major: the last variable varies fastest.
    """

    variables: tuple
    cards: tuple
    probs: tuple

    def __post_init__(self):
        vs, cs = tuple(self.variables), tuple(self.cards)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate variables")
        if len(vs) != len(cs) or any(c < 1 for c in cs):
            raise ValueError("bad cardinalities")
        ps = tuple(Fraction(p) for p in self.probs)
        if len(ps) != math.prod(cs):
            raise ValueError(f"expected {math.prod(cs)} probabilities, got {len(ps)}")
        if any(p < 0 for p in ps):
            raise ValueError("negative probability")
        if sum(ps) != 1:
            raise ValueError(f"probabilities sum to {sum(ps)}, not 1")
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "cards", cs)
        object.__setattr__(self, "probs", ps)

    @classmethod
    def from_dict(cls, variables: Sequence[str], weights: Mapping, cards: Sequence[int] | None = None):
        """Build from ``{outcome tuple: weight}``; missing outcomes are 0."""
        cards = tuple(cards) if cards is not None else (2,) * len(variables)
        probs = [Fraction(weights.get(o, 0)) for o in product(*(range(c) for c in cards))]
        return cls(tuple(variables), cards, tuple(probs))

    @classmethod
    def uniform(cls, variables, cards=None):
        cards = tuple(cards) if cards is not None else (2,) * len(variables)
        n = math.prod(cards)
        return cls(tuple(variables), cards, (Fraction(1, n),) * n)

    @property
    def outcomes(self):
        return product(*(range(c) for c in self.cards))

    def items(self):
        return zip(self.outcomes, self.probs)

    def __getitem__(self, outcome) -> Fraction:
        idx = 0
        for o, c in zip(outcome, self.cards):
            idx = idx * c + o
        return self.probs[idx]

    def card(self, v) -> int:
        return self.cards[self.variables.index(v)]

    def reorder(self, variables: Sequence[str]) -> "ProbTable":
        if sorted(variables) != sorted(self.variables):
            raise ValueError("reorder needs the same variables")
        pos = [self.variables.index(v) for v in variables]
        cards = tuple(self.cards[i] for i in pos)
        w = {tuple(o[i] for i in pos): p for o, p in self.items()}
        return ProbTable.from_dict(variables, w, cards)

    def to_json(self) -> dict:
        return {
            "vars": [{"name": v, "card": c} for v, c in zip(self.variables, self.cards)],
            "probs": [{"outcome": list(o), "p": str(p)} for o, p in self.items()],
        }

    @classmethod
    def from_json(cls, data) -> "ProbTable":
        if isinstance(data, str):
            data = json.loads(data)
        vs = [d["name"] for d in data["vars"]]
        cs = [int(d.get("card", 2)) for d in data["vars"]]
        w = {tuple(e["outcome"]): Fraction(e["p"]) for e in data["probs"]}
        return cls.from_dict(vs, w, cs)


def marginalize(p: ProbTable, s: Iterable[str]) -> ProbTable:
    """Exact marginal on ``s`` (kept in ``p``'s variable order)."""
    s = set(s)
    unknown = s - set(p.variables)
    if unknown:
        raise ValueError(f"unknown variables {sorted(unknown)}")
    keep = [i for i, v in enumerate(p.variables) if v in s]
    acc: dict = {}
    for o, w in p.items():
        k = tuple(o[i] for i in keep)
        acc[k] = acc.get(k, 0) + w
    return ProbTable.from_dict([p.variables[i] for i in keep], acc, [p.cards[i] for i in keep])


def _marg_dict(p: ProbTable, s: Sequence[str]) -> dict:
    """``{outcome on s (in the given order): prob}``."""
    pos = [p.variables.index(v) for v in s]
    acc: dict = {}
    for o, w in p.items():
        k = tuple(o[i] for i in pos)
        acc[k] = acc.get(k, 0) + w
    return acc


def check_consistent(p: ProbTable, q: ProbTable):
    """Raise ``InconsistentMarginals`` unless ``p`` and ``q`` agree on their overlap."""
    shared = sorted(set(p.variables) & set(q.variables))
    for v in shared:
        if p.card(v) != q.card(v):
            raise InconsistentMarginals(f"cardinality of {v} differs")
    mp, mq = _marg_dict(p, shared), _marg_dict(q, shared)
    for k in sorted(set(mp) | set(mq)):
        if mp.get(k, 0) != mq.get(k, 0):
            raise InconsistentMarginals(
                f"marginals on {shared} differ at outcome {k}: {mp.get(k, 0)} vs {mq.get(k, 0)}", k)


def adhesive_glue(p: ProbTable, q: ProbTable) -> ProbTable:
    """``P = p q / p_S`` on ``I u J`` with ``S = I n J`` and 0/0 = 0.

    The result has variables ``p.variables`` followed by the new ones of
    ``q``; its marginals are ``p`` and ``q`` and ``I\\J _|_ J\\I | S``.
    """
    check_consistent(p, q)
    shared = [v for v in p.variables if v in q.variables]
    new = [v for v in q.variables if v not in p.variables]
    ms = _marg_dict(p, shared)
    ppos = [p.variables.index(v) for v in shared]
    qs = [q.variables.index(v) for v in shared]
    qn = [q.variables.index(v) for v in new]
    # q grouped by its overlap outcome
    qgroups: dict = {}
    for o, w in q.items():
        if w:
            qgroups.setdefault(tuple(o[i] for i in qs), []).append((tuple(o[i] for i in qn), w))
    out: dict = {}
    for o, w in p.items():
        if not w:
            continue
        s = tuple(o[i] for i in ppos)
        den = ms[s]
        for tail, wq in qgroups.get(s, ()):
            out[o + tail] = w * wq / den
    cards = list(p.cards) + [q.card(v) for v in new]
    return ProbTable.from_dict(list(p.variables) + new, out, cards)


@dataclass(frozen=True)
class MarginalScenario:
    """Reduced hypergraph plus one table per edge."""

    hypergraph: Hypergraph
    tables: Mapping

    def __post_init__(self):
        h = self.hypergraph
        if not h.is_reduced:
            raise ValueError("marginal scenario hypergraph must be reduced")
        tabs = {frozenset(k): v for k, v in self.tables.items()}
        if set(tabs) != set(h.edges):
            raise ValueError("need exactly one table per hyperedge")
        for e, t in tabs.items():
            if set(t.variables) != set(e):
                raise ValueError(f"table variables {t.variables} do not match edge {sorted(e)}")
        es = list(h.edge_list)
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                check_consistent(tabs[frozenset(es[i])], tabs[frozenset(es[j])])
        object.__setattr__(self, "tables", tabs)

    @classmethod
    def from_joint(cls, p: ProbTable, h: Hypergraph) -> "MarginalScenario":
        return cls(h, {e: marginalize(p, e) for e in h.edges})


def vorobev_extend(m: MarginalScenario) -> ProbTable:
    """Global table reproducing every edge table of an acyclic scenario.

    Edge tables are glued along a running-intersection ordering, so the
    result is the Markov extension ``prod P(E_i) / P(S_i)``.
    """
    h = m.hypergraph
    if not graham(h)[0]:
        raise ValueError("scenario hypergraph is cyclic; no extension construction applies")
    order = rio_ordering(h)
    p = None
    for e in order.edges:
        t = m.tables[e]
        p = t if p is None else adhesive_glue(p, t)
    return p


def markov_extension(p: ProbTable, t: Hypergraph) -> ProbTable:
    """Extension of ``p``'s marginals on the edges of an acyclic ``t``."""
    return vorobev_extend(MarginalScenario.from_joint(p, t))


def factorization_product(m: MarginalScenario) -> dict:
    """Pointwise ``prod_i P(E_i) / P(S_i)`` along a running-intersection
    ordering, evaluated independently of the gluing code.  Keys are
    outcome tuples over the sorted node list."""
    h = m.hypergraph
    order = rio_ordering(h)
    nodes = list(h.nodes)
    cards = {}
    for t in m.tables.values():
        for v, c in zip(t.variables, t.cards):
            cards[v] = c
    out = {}
    for o in product(*(range(cards[v]) for v in nodes)):
        val = dict(zip(nodes, o))
        acc = Fraction(1)
        for e, s in zip(order.edges, order.separators):
            t = m.tables[e]
            num = t[tuple(val[v] for v in t.variables)]
            if s:
                den = sum(w for oo, w in t.items()
                          if all(oo[t.variables.index(v)] == val[v] for v in s))
            else:
                den = Fraction(1)
            if num == 0:
                acc = Fraction(0)
                break
            acc *= num / den
        out[o] = acc
    return out


# -- information measures ---------------------------------------------------------


def _entropy_bits(ws) -> float:
    h = 0.0
    for w in ws:
        if w:
            h -= float(w) * (math.log2(w.numerator) - math.log2(w.denominator))
    return max(h, 0.0)


def entropy(p: ProbTable, s: Iterable[str]) -> float:
    s = list(s)
    if not s:
        return 0.0
    return _entropy_bits(_marg_dict(p, s).values())


def _disjoint(p, a, b, c):
    a, b, c = set(a), set(b), set(c)
    if a & b or a & c or b & c:
        raise ValueError("sets must be pairwise disjoint")
    unknown = (a | b | c) - set(p.variables)
    if unknown:
        raise ValueError(f"unknown variables {sorted(unknown)}")
    return sorted(a), sorted(b), sorted(c)


def mutual_information(p: ProbTable, a, b, c=()) -> float:
    """``I(A:B|C)`` in bits; exactly 0.0 when the factorization test passes."""
    a, b, c = _disjoint(p, a, b, c)
    if is_conditionally_independent(p, a, b, c):
        return 0.0
    v = entropy(p, a + c) + entropy(p, b + c) - entropy(p, a + b + c) - entropy(p, c)
    return max(v, 0.0)


def is_conditionally_independent(p: ProbTable, a, b, c=()) -> bool:
    """Exact test ``P(abc) P(c) == P(ac) P(bc)`` on every outcome."""
    a, b, c = _disjoint(p, a, b, c)
    if not a or not b:
        return True
    pabc = _marg_dict(p, a + b + c)
    pac, pbc, pc = _marg_dict(p, a + c), _marg_dict(p, b + c), _marg_dict(p, c)
    na, nb = len(a), len(b)
    ranges = [range(p.card(v)) for v in a + b + c]
    for o in product(*ranges):
        oa, ob, oc = o[:na], o[na:na + nb], o[na + nb:]
        if pabc.get(o, 0) * pc.get(oc, 0) != pac.get(oa + oc, 0) * pbc.get(ob + oc, 0):
            return False
    return True


@dataclass(frozen=True)
class EntropyVector:
    """``H(S)`` in bits for every subset ``S`` (keys: sorted tuples)."""

    variables: tuple
    values: Mapping

    def __getitem__(self, s) -> float:
        return self.values[tuple(sorted(s))]

    def point(self, coords: Sequence[str]) -> list:
        """Values in the order of entropy coordinate labels ``H(A,B)``."""
        out = []
        for c in coords:
            inner = c[2:-1]
            out.append(self[[v for v in inner.split(",") if v]])
        return out


def entropy_vector(p: ProbTable) -> EntropyVector:
    vs = tuple(sorted(p.variables))
    vals = {}
    for mask in range(1 << len(vs)):
        s = tuple(v for i, v in enumerate(vs) if mask >> i & 1)
        vals[s] = entropy(p, s)
    return EntropyVector(vs, vals)


# -- random tables (tests and scripts) ----------------------------------------------


def random_table(variables: Sequence[str], rng: random.Random, *, cards=None,
                 max_weight: int = 6, zero_prob: float = 0.2) -> ProbTable:
    """Random rational table; some outcomes get weight 0 to exercise 0/0."""
    cards = tuple(cards) if cards is not None else (2,) * len(variables)
    n = math.prod(cards)
    while True:
        w = [0 if rng.random() < zero_prob else rng.randint(1, max_weight) for _ in range(n)]
        tot = sum(w)
        if tot:
            return ProbTable(tuple(variables), cards, tuple(Fraction(x, tot) for x in w))


def deterministic_table(variables: Sequence[str], outcome: Sequence[int], cards=None) -> ProbTable:
    return ProbTable.from_dict(variables, {tuple(outcome): 1}, cards)

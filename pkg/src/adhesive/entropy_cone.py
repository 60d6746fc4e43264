"""Shannon cones, CI hyperplanes and clique cones in entropy coordinates.

Coordinates are joint entropies ``H(S)`` of subsets ``S`` of an ordered
variable list, rendered ``H(A,B)`` with variables in sorted order.  The empty
set is kept as the coordinate ``H()`` and pinned to zero by an equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .causal import CiSet, CiStatement
from .hypergraph import Hypergraph
from .polyhedra import LinIneqSystem, implies


def entropy_label(subset: Iterable[str]) -> str:
    return "H(" + ",".join(sorted(subset)) + ")"


@dataclass(frozen=True)
class EntropyCoordSpace:
    """All ``2**n`` subset coordinates over ``variables`` (sorted)."""

    variables: tuple

    def __post_init__(self):
        vs = tuple(sorted(set(self.variables)))
        if len(vs) != len(self.variables):
            raise ValueError("duplicate variables")
        object.__setattr__(self, "variables", vs)

    @property
    def n(self) -> int:
        return len(self.variables)

    def subset(self, mask: int) -> tuple:
        return tuple(v for i, v in enumerate(self.variables) if mask >> i & 1)

    def mask(self, subset: Iterable[str]) -> int:
        idx = {v: i for i, v in enumerate(self.variables)}
        m = 0
        for v in subset:
            m |= 1 << idx[v]
        return m

    @property
    def masks(self) -> tuple:
        # by size, then lexicographic on the member labels
        return tuple(sorted(range(1 << self.n), key=lambda m: (bin(m).count("1"), self.subset(m))))

    @property
    def coords(self) -> tuple:
        return tuple(entropy_label(self.subset(m)) for m in self.masks)

    def label(self, mask: int) -> str:
        return entropy_label(self.subset(mask))

    def row(self, terms: dict, rhs=0) -> list:
        """Dense row from ``{mask: coeff}``."""
        pos = {m: i for i, m in enumerate(self.masks)}
        r = [0] * (len(pos) + 1)
        for m, v in terms.items():
            r[pos[m]] += v
        r[-1] = rhs
        return r

    def cmi_terms(self, a: int, b: int, c: int) -> dict:
        """``I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C)`` as ``{mask: coeff}``."""
        t: dict = {}
        for m, v in ((a | c, 1), (b | c, 1), (a | b | c, -1), (c, -1)):
            t[m] = t.get(m, 0) + v
        return {m: v for m, v in t.items() if v}


def _elemental(space: EntropyCoordSpace, restrict: int | None = None):
    """Elemental rows as ``(kind, terms)`` over the variables in ``restrict``."""
    n = space.n
    full_set = (1 << n) - 1 if restrict is None else restrict
    idx = [i for i in range(n) if full_set >> i & 1]
    rows = []
    for i in idx:
        rest = full_set & ~(1 << i)
        rows.append((("mono", i), {full_set: 1, rest: -1} if rest else {full_set: 1}))
    for a, b in combinations(idx, 2):
        others = [k for k in idx if k not in (a, b)]
        for r in range(len(others) + 1):
            for K in combinations(others, r):
                km = sum(1 << k for k in K)
                rows.append((("sub", a, b, km), space.cmi_terms(1 << a, 1 << b, km)))
    return rows


def shannon_cone(variables: Sequence[str]) -> LinIneqSystem:
    """Elemental Shannon inequalities plus ``H() = 0``.

    There are ``n`` monotonicity rows and ``C(n,2) 2**(n-2)`` submodularity
    rows.
    """
    if not variables:
        raise ValueError("need at least one variable")
    space = EntropyCoordSpace(tuple(variables))
    rows = [space.row(t) for _, t in _elemental(space)]
    return LinIneqSystem(space.coords, tuple(rows), (space.row({0: 1}),))


def shannon_row_count(n: int) -> int:
    return n if n < 2 else n + (n * (n - 1) // 2) * 2 ** (n - 2)


def _ci_masks(space: EntropyCoordSpace, st: CiStatement):
    return space.mask(st.a), space.mask(st.b), space.mask(st.c)


def ci_hyperplanes(ci: CiSet | Iterable[CiStatement], space: EntropyCoordSpace) -> list:
    """One equality row ``I(A:B|C) = 0`` per statement."""
    stmts = ci.statements if isinstance(ci, CiSet) else ci
    missing = set()
    for st in stmts:
        missing |= (set(st.a) | set(st.b) | set(st.c)) - set(space.variables)
    if missing:
        raise ValueError(f"CI statements mention unknown variables {sorted(missing)}")
    return [space.row(space.cmi_terms(*_ci_masks(space, st))) for st in sorted(stmts)]


def _reduced_candidates(space: EntropyCoordSpace, stmts) -> set:
    """Elemental rows made redundant by ``I(A:B|C) = 0``: the rows
    ``I(a:e|K)`` with ``a`` in A (or B), ``e`` outside ``A u B u C`` and
    ``K`` between ``B u C`` (resp. ``A u C``) and everything but ``a, e``
    within ``A u B u C``."""
    out = set()
    n = space.n
    for st in stmts:
        a, b, c = _ci_masks(space, st)
        abc = a | b | c
        outside = [e for e in range(n) if not abc >> e & 1]
        for side, other in ((a, b), (b, a)):
            for i in range(n):
                if not side >> i & 1:
                    continue
                base = other | c
                extra_pool = [k for k in range(n) if (side & ~(1 << i)) >> k & 1]
                for e in outside:
                    for r in range(len(extra_pool) + 1):
                        for K in combinations(extra_pool, r):
                            km = base | sum(1 << k for k in K)
                            lo, hi = min(i, e), max(i, e)
                            out.add(("sub", lo, hi, km))
        # elemental pieces of I(A:B|C) itself; the LP below only confirms
        # the piece that coincides with the whole statement
        for i in range(n):
            for j in range(i + 1, n):
                if not ((a >> i & 1 and b >> j & 1) or (b >> i & 1 and a >> j & 1)):
                    continue
                pool = [k for k in range(n) if abc >> k & 1 and k not in (i, j) and not c >> k & 1]
                for r in range(len(pool) + 1):
                    for K in combinations(pool, r):
                        out.add(("sub", i, j, c | sum(1 << k for k in K)))
    return out


def reduced_shannon_cone(variables: Sequence[str], ci: CiSet | Iterable[CiStatement] = ()) -> LinIneqSystem:
    """Shannon cone without the elemental rows that the CI equalities make
    redundant, together with those equalities.

    Candidate rows are dropped one at a time, each only after an exact LP
    confirms it still follows from the rows kept so far and the CI
    equalities, so the solution set never changes.
    """
    space = EntropyCoordSpace(tuple(variables))
    stmts = sorted(ci.statements if isinstance(ci, CiSet) else ci)
    eqs = [space.row({0: 1})] + ci_hyperplanes(stmts, space)
    elem = _elemental(space)
    if not stmts:
        return LinIneqSystem(space.coords, tuple(space.row(t) for _, t in elem), tuple(eqs))
    cands = _reduced_candidates(space, stmts)
    keep = [(k, space.row(t)) for k, t in elem]
    for i in range(len(keep) - 1, -1, -1):
        k, r = keep[i]
        if k not in cands:
            continue
        rest = LinIneqSystem(space.coords, tuple(x for j, (_, x) in enumerate(keep) if j != i), tuple(eqs))
        if implies(rest, r):
            del keep[i]
    return LinIneqSystem(space.coords, tuple(r for _, r in keep), tuple(eqs))


def clique_cone_embedded(clique: Iterable[str], space: EntropyCoordSpace) -> LinIneqSystem:
    """Shannon cone of the clique's variables, written in the full space."""
    cm = space.mask(clique)
    if not cm:
        raise ValueError("empty clique")
    rows = [space.row(t) for _, t in _elemental(space, cm)]
    return LinIneqSystem(space.coords, tuple(rows), (space.row({0: 1}),))


def marginal_coords(scenario: Hypergraph, space: EntropyCoordSpace) -> tuple:
    """Labels ``H(S)`` for every nonempty ``S`` inside some scenario edge."""
    masks = set()
    for e in scenario.edges:
        em = space.mask(e)
        sub = em
        while sub:
            masks.add(sub)
            sub = (sub - 1) & em
    return tuple(space.label(m) for m in space.masks if m in masks)


def coords_from_names(names: Iterable[str]) -> tuple:
    """Entropy labels from compact names like ``AD`` or ``A1,B2`` lists.

    Each item is either a label ``H(...)`` or a comma separated variable
    list; a bare token without commas is split into single characters.
    """
    out = []
    for nm in names:
        nm = nm.strip()
        if nm.startswith("H("):
            out.append(entropy_label([v for v in nm[2:-1].split(",") if v]))
        elif "," in nm or "+" in nm:
            out.append(entropy_label([v for v in nm.replace("+", ",").split(",") if v]))
        else:
            out.append(entropy_label(list(nm)))
    return tuple(out)


def cmi_row(space: EntropyCoordSpace, a, b, c=()) -> list:
    """Dense row for ``I(A:B|C)`` (useful for tests and reporting)."""
    return space.row(space.cmi_terms(space.mask(a), space.mask(b), space.mask(c)))

"""Fourier-Motzkin projection and LP-based redundancy removal."""
from __future__ import annotations

import logging
import math
import random
from fractions import Fraction
from typing import Iterable, Sequence

from .lp import OPTIMAL, implied_rows, is_feasible, lp_min
from .system import LinIneqSystem, reduce_modulo, rref

log = logging.getLogger(__name__)

DEFAULT_PRUNE_THRESHOLD = 2000


def _gcd_tuple(row):
    g = math.gcd(*row)
    return tuple(v // g for v in row) if g > 1 else tuple(row)


def _irredundant(rows: list, *, order: Sequence[int] | None = None) -> list:
    """Indices of an irredundant subset of ``rows`` (free variables, no
    equalities).  Rows are dropped one at a time, each tested against the
    rows still kept.  One LP over all rows per row; used as a fallback."""
    keep = list(range(len(rows)))
    alive = [True] * len(rows)
    for i in (order if order is not None else range(len(rows))):
        others = [rows[j] for j in keep if j != i and alive[j]]
        if implied_rows(others, rows[i]):
            alive[i] = False
    return [i for i in keep if alive[i]]


def _redundancy_order(rows):
    # dense, large-coefficient rows are the usual suspects; test them first
    return sorted(range(len(rows)),
                  key=lambda i: (-sum(1 for v in rows[i][:-1] if v), -sum(abs(v) for v in rows[i][:-1]), i))


def _dotf(a, x):
    return sum(v * w for v, w in zip(a, x) if v)


def _interior(rows: list):
    """``(z, eq_idx)``: a point strictly inside every row, or ``(None,
    indices)`` of rows that hold with equality on the whole (feasible) set.

    Maximizes the common slack ``t <= 1``.  When the best slack is 0 the
    optimal multipliers are supported on implicit equalities.
    """
    d = len(rows[0]) - 1
    ext = [tuple(r[:-1]) + (-1, r[-1]) for r in rows] + [(0,) * d + (-1, -1)]
    res = lp_min(ext, (0,) * d + (-1,))
    if res.status != OPTIMAL:  # pragma: no cover - bounded by t <= 1
        raise AssertionError("interior point LP failed")
    if -res.value > 0:
        return res.point[:d], None
    return None, [i for i, y in enumerate(res.mult[:len(rows)]) if y > 0]


def _as_int_point(x):
    den = 1
    for v in x:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in x], den


def _perturbed(rows, z_int, z_den, slack, seed):
    """A deterministic pseudo-random interior point near ``z`` (exact)."""
    rng = random.Random(seed)
    r = [rng.randint(-7, 7) for _ in z_int]
    # z + delta * r stays strictly inside when delta * |a.r| < slack (in units of 1/z_den)
    lim = None
    for row, sl in zip(rows, slack):
        ar = sum(a * v for a, v in zip(row, r) if a)
        if ar < 0:
            q = Fraction(sl, -ar * 2)
            lim = q if lim is None or q < lim else lim
    delta = lim if lim is not None else Fraction(1)
    delta = min(delta, Fraction(1))
    num = [zi * delta.denominator + delta.numerator * ri for zi, ri in zip(z_int, r)]
    return num, z_den * delta.denominator


def _shoot(rows, status, z_int, z_den, p):
    """Rows first crossed by the segment from ``z`` to ``p`` (ties kept)."""
    p_int, p_den = _as_int_point(p)
    v = [pi * z_den - zi * p_den for pi, zi in zip(p_int, z_int)]
    best_num = best_den = None
    hits: list = []
    for j, r in enumerate(rows):
        if status[j] is False:
            continue
        av = sum(a * x for a, x in zip(r, v) if a)
        if av >= 0:
            continue
        sl = sum(a * x for a, x in zip(r, z_int) if a) - r[-1] * z_den
        # crossing parameter proportional to sl / -av
        if best_num is None or sl * best_den < best_num * -av:
            best_num, best_den, hits = sl, -av, [j]
        elif sl * best_den == best_num * -av:
            hits.append(j)
    return hits


def _clarkson(rows: list, z) -> list:
    """Indices of the irredundant rows, given a strictly interior point ``z``.

    Each candidate is tested by an LP over the facets found so far only.  If
    it is not implied by them, the witness point is joined to an interior
    point and the first row the segment crosses is a new facet.  A tie is
    retried from a few perturbed interior points before falling back to a
    full LP on the tied rows.
    """
    z_int, z_den = _as_int_point(z)
    slack = [sum(a * x for a, x in zip(r, z_int) if a) - r[-1] * z_den for r in rows]
    starts = [(z_int, z_den)]
    facets: list = []
    status = [None] * len(rows)  # True facet, False redundant
    for i in range(len(rows)):
        while status[i] is None:
            res = lp_min([rows[k] for k in facets], rows[i][:-1])
            if res.status == OPTIMAL and res.value >= rows[i][-1]:
                status[i] = False
                break
            if res.status == OPTIMAL:
                p = res.point
            else:
                ray = res.ray
                gap = _dotf(rows[i][:-1], ray)  # < 0
                lam = Fraction(slack[i], z_den) / (-gap) + 1
                p = [Fraction(zi, z_den) + lam * dj for zi, dj in zip(z_int, ray)]
            hits = []
            for attempt in range(4):
                if attempt >= len(starts):
                    zi, zd = starts[0]
                    starts.append(_perturbed(rows, zi, zd, [
                        sum(a * x for a, x in zip(r, zi) if a) - r[-1] * zd for r in rows], attempt))
                hits = _shoot(rows, status, *starts[attempt], p)
                if len(hits) == 1:
                    break
            if len(hits) == 1:
                status[hits[0]] = True
                facets.append(hits[0])
                continue
            found = False
            for j in hits:
                if status[j] is not None:
                    continue
                others = [rows[k] for k in range(len(rows)) if k != j and status[k] is not False]
                if implied_rows(others, rows[j]):
                    status[j] = False
                else:
                    status[j] = True
                    facets.append(j)
                    found = True
            if not found and status[i] is None:  # pragma: no cover - a crossed facet always exists
                raise AssertionError("ray shooting found no facet")
    return [i for i in range(len(rows)) if status[i]]


def _split_reduced(ineqs, eqs, n):
    """Inequalities reduced modulo the equalities: ``(eq_rows, full, reduced)``
    where ``reduced`` keeps only the non-pivot columns.  Trivially true rows
    are dropped; ``None`` signals a row ``0 >= b`` with ``b > 0``."""
    eq_rows, pivots = rref(eqs, n)
    piv = set(pivots)
    free = [j for j in range(n) if j not in piv]
    full = sorted({reduce_modulo(r, eq_rows, pivots) for r in ineqs})
    full = [r for r in full if any(r[:-1]) or r[-1] > 0]
    if any(not any(r[:-1]) for r in full):
        return None
    return eq_rows, full, [tuple(r[j] for j in free) + (r[-1],) for r in full]


def lp_remove_redundant(system: LinIneqSystem, *, detect_equalities: bool = True) -> LinIneqSystem:
    """Minimal description of the same solution set.

    Inequalities implied by the remaining ones are removed; with
    ``detect_equalities`` inequalities that hold with equality everywhere are
    promoted to equalities.  Infeasible input comes back flagged and empty.
    """
    flagged = LinIneqSystem(system.coords, (), (), True, system.meta)
    if system.infeasible or not is_feasible(system):
        return flagged
    n = system.dim
    eqs, ineqs = list(system.eqs), list(system.ineqs)
    while True:
        split = _split_reduced(ineqs, eqs, n)
        if split is None:  # pragma: no cover - excluded by the feasibility check
            return flagged
        eq_rows, full, reduced = split
        if not reduced:
            kept = []
            break
        if not any(any(r[:-1]) for r in reduced):  # pragma: no cover
            kept = []
            break
        z, implicit = _interior(reduced)
        if z is not None:
            kept = [full[i] for i in _clarkson(reduced, z)]
            break
        if not detect_equalities:
            kept = [full[i] for i in _irredundant(reduced, order=_redundancy_order(reduced))]
            break
        eqs = list(eq_rows) + [full[i] for i in implicit]
        ineqs = [full[i] for i in range(len(full)) if i not in set(implicit)]
        eqs = list(rref(eqs, n)[0])
    eq_rows = rref(eqs, n)[0]
    return LinIneqSystem(system.coords, tuple(kept), tuple(eq_rows), False, system.meta).canonical()


def fm_eliminate(system: LinIneqSystem, drop: Iterable[str], *,
                 prune_threshold: int = DEFAULT_PRUNE_THRESHOLD,
                 final_prune: bool = True, chernikov: bool = True) -> LinIneqSystem:
    """Project ``system`` onto the coordinates not listed in ``drop``.

    Equalities are used first to substitute dropped coordinates.  The rest
    are removed by Fourier-Motzkin steps, choosing each time the coordinate
    with the fewest generated pairs (ties by label).  Every row carries the
    set ``H`` of input rows it was combined from.  A row is discarded when
    ``|H|`` exceeds one plus the number of steps (Chernikov), when ``|H|``
    exceeds one plus the number of columns that occur in ``H`` but vanish in
    the row (effectively eliminated columns), or when ``H`` contains another
    row's history.  An exact LP pass
    runs whenever the row count exceeds ``prune_threshold`` and at the end.
    """
    coords = list(system.coords)
    drop = set(drop)
    unknown = drop - set(coords)
    if unknown:
        raise ValueError(f"cannot drop unknown coordinates: {sorted(unknown)}")
    if system.infeasible:
        kept = tuple(c for c in coords if c not in drop)
        return LinIneqSystem(kept, (), (), True, system.meta)
    n = len(coords)
    dpos = {coords.index(c) for c in drop}
    order_log: list[str] = []

    ineqs = [tuple(r) for r in system.ineqs]
    eqs = [list(r) for r in system.eqs]

    # -- equality substitution -----------------------------------------------
    while True:
        best = None
        for ei, e in enumerate(eqs):
            for j in dpos:
                if e[j]:
                    occ = sum(1 for r in ineqs if r[j])
                    key = (occ, coords[j])
                    if best is None or key < best[0]:
                        best = (key, ei, j)
        if best is None:
            break
        _, ei, j = best
        e = eqs.pop(ei)
        if e[j] < 0:
            e = [-v for v in e]
        ineqs = [_sub(r, e, j) for r in ineqs]
        eqs = [list(_sub(r, e, j)) for r in eqs]
        order_log.append(f"subst {coords[j]}")
        dpos.discard(j)
    for e in eqs:
        if not any(e[:-1]) and e[-1]:
            kept = tuple(c for c in coords if c not in drop)
            return LinIneqSystem(kept, (), (), True, system.meta)

    rows = {}
    for r in ineqs:
        if not any(r[:-1]):
            if r[-1] > 0:
                kept = tuple(c for c in coords if c not in drop)
                return LinIneqSystem(kept, (), (), True, system.meta)
            continue
        rows.setdefault(_gcd_tuple(r), None)
    hist = {r: 1 << i for i, r in enumerate(rows)}
    # support (nonzero columns, rhs included) of the input rows in a history
    supp = {r: _support(r) for r in rows}
    eqs_t = [tuple(e) for e in eqs if any(e[:-1])]

    # -- Fourier-Motzkin steps ------------------------------------------------
    steps = 0
    remaining = {j for j in dpos if any(r[j] for r in hist)}
    while remaining:
        best = None
        for j in remaining:
            pos = sum(1 for r in hist if r[j] > 0)
            neg = sum(1 for r in hist if r[j] < 0)
            key = (pos * neg, coords[j])
            if best is None or key < best[0]:
                best = (key, j)
        j = best[1]
        steps += 1
        pos = [r for r in hist if r[j] > 0]
        neg = [r for r in hist if r[j] < 0]
        new = {r: hist[r] for r in hist if r[j] == 0}
        new_supp = {r: supp[r] for r in new}
        limit = steps + 1
        for p in pos:
            cp, hp, sp = p[j], hist[p], supp[p]
            for q in neg:
                h = hp | hist[q]
                size = bin(h).count("1")
                if chernikov and size > limit:
                    continue
                cq = -q[j]
                comb = tuple(cq * a + cp * b for a, b in zip(p, q))
                if not any(comb[:-1]):
                    if comb[-1] > 0:
                        kept = tuple(c for c in coords if c not in drop)
                        return LinIneqSystem(kept, (), (), True, system.meta)
                    continue
                s_h = sp | supp[q]
                # effectively eliminated columns: present in the history, absent here
                if chernikov and size > 1 + bin(s_h & ~_support(comb)).count("1"):
                    continue
                comb = _gcd_tuple(comb)
                old = new.get(comb)
                if old is None or size < bin(old).count("1"):
                    new[comb] = h
                    new_supp[comb] = s_h
        if chernikov:
            new = _drop_dominated(new)
        remaining.discard(j)
        remaining = {k for k in remaining if any(r[k] for r in new)}
        order_log.append(f"fm {coords[j]} ({len(pos)}x{len(neg)} -> {len(new)})")
        log.debug("eliminated %s: %d x %d -> %d rows", coords[j], len(pos), len(neg), len(new))
        if len(new) > prune_threshold:
            new = _lp_prune(new, eqs_t, n)
            log.debug("lp prune -> %d rows", len(new))
        hist = new
        supp = {r: new_supp[r] for r in new}

    kept_idx = [k for k in range(n) if coords[k] not in drop]
    kept = tuple(coords[k] for k in kept_idx)

    def restrict(r):
        return tuple(r[k] for k in kept_idx) + (r[-1],)

    meta = dict(system.meta)
    meta["elimination_order"] = order_log
    out = LinIneqSystem(kept, tuple(restrict(r) for r in hist), tuple(restrict(e) for e in eqs_t),
                        False, meta)
    if final_prune:
        out = lp_remove_redundant(out)
    return out


def _support(row) -> int:
    m = 0
    for k, v in enumerate(row):
        if v:
            m |= 1 << k
    return m


def _sub(row, e, j):
    """Eliminate column j from row using equality e (e[j] > 0)."""
    c = row[j]
    if not c:
        return tuple(row)
    p = e[j]
    new = [p * a - c * b for a, b in zip(row, e)]
    return _gcd_tuple(new) if any(new) else tuple(new)


def _drop_dominated(rows: dict) -> dict:
    """Remove rows whose history strictly contains another row's history."""
    items = sorted(rows.items(), key=lambda kv: bin(kv[1]).count("1"))
    kept: list = []
    hs: list[int] = []
    for r, h in items:
        if any(g != h and (g & h) == g for g in hs):
            continue
        kept.append((r, h))
        hs.append(h)
    return dict(kept)


def _lp_prune(rows: dict, eqs, n) -> dict:
    """Exact redundancy removal on an intermediate system (all columns kept)."""
    e_rows, pivots = rref(eqs, n)
    piv = set(pivots)
    free = [j for j in range(n) if j not in piv]
    items = list(rows.items())
    red = []
    for r, _ in items:
        rr = reduce_modulo(r, e_rows, pivots)
        red.append(tuple(rr[j] for j in free) + (rr[-1],))
    z, _ = _interior(red)
    if z is not None:
        keep = _clarkson(red, z)
    else:
        keep = _irredundant(red, order=_redundancy_order(red))
    return dict(items[i] for i in keep)

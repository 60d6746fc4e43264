"""Exact rational linear programming.

Two-phase primal simplex on a tableau whose rows are integer vectors with a
per-row positive denominator, so no floating point is ever involved.  The
entering column is chosen by Dantzig's rule; after a run of degenerate
pivots the solver switches to Bland's rule, which cannot cycle, and switches
back as soon as the objective strictly improves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .system import LinIneqSystem, Row, normalize_row, reduce_modulo, rref

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

DEGENERATE_SWITCH = 20


@dataclass
class LPResult:
    status: str
    x: list | None = None          # Fractions, one per column, when feasible
    value: Fraction | None = None  # objective value when optimal
    pivots: int = 0
    dual: list | None = None       # simplex multipliers per row (optimal, with duals=True)
    farkas: list | None = None     # pi with A^T pi <= 0, b.pi > 0 (infeasible, with duals=True)


class _Tableau:
    def __init__(self, A, b, n, reuse_units=True):
        m = len(A)
        self.n = n  # number of structural columns
        rows, dens, basis = [], [], [None] * m
        self.flipped = []
        for i in range(m):
            r = list(A[i]) + [b[i]]
            self.flipped.append(r[-1] < 0)
            if r[-1] < 0:
                r = [-v for v in r]
            rows.append(r)
            dens.append(1)
        # reuse unit columns as the starting basis
        used = set()
        for j in range(n if reuse_units else 0):
            nz = [i for i in range(m) if rows[i][j]]
            if len(nz) == 1 and rows[nz[0]][j] > 0 and basis[nz[0]] is None and j not in used:
                i = nz[0]
                # scale row so the basic entry equals the row denominator
                dens[i] = rows[i][j]
                basis[i] = j
                used.add(j)
        self.art = [i for i in range(m) if basis[i] is None]
        ncols = n + len(self.art)
        for k, i in enumerate(self.art):
            basis[i] = n + k
        for i in range(m):
            r = rows[i]
            ext = [0] * len(self.art)
            if basis[i] >= n:
                ext[basis[i] - n] = dens[i]
            rows[i] = r[:-1] + ext + [r[-1]]
        self.rows, self.dens, self.basis = rows, dens, basis
        self.ncols = ncols
        self.pivots = 0

    def objective_row(self, cost):
        """Reduced-cost row (integers, positive denominator) for a cost vector
        over all columns; basic columns get zero."""
        den = 1
        for i, j in enumerate(self.basis):
            if cost[j]:
                den = den * self.dens[i] // math.gcd(den, self.dens[i])
        z = [c * den for c in cost] + [0]
        for i, j in enumerate(self.basis):
            cj = cost[j]
            if cj:
                f = cj * den // self.dens[i]
                r = self.rows[i]
                z = [a - f * v for a, v in zip(z, r)]
        # z[-1] now holds -den * objective
        return _reduce(z, den)

    def pivot(self, p, q, z_rows):
        rows, dens = self.rows, self.dens
        prow = rows[p]
        piv = prow[q]
        for i in range(len(rows)):
            if i == p:
                continue
            f = rows[i][q]
            if not f:
                continue
            new = [piv * a - f * b for a, b in zip(rows[i], prow)]
            d = dens[i] * piv
            if d < 0:
                new = [-v for v in new]
                d = -d
            rows[i], dens[i] = _reduce(new, d)
        for k, (z, zd) in enumerate(z_rows):
            f = z[q]
            if not f:
                continue
            new = [piv * a - f * b for a, b in zip(z, prow)]
            d = zd * piv
            if d < 0:
                new = [-v for v in new]
                d = -d
            z_rows[k] = _reduce(new, d)
        if piv < 0:
            rows[p] = [-v for v in prow]
            dens[p] = -piv
        else:
            dens[p] = piv
        self.basis[p] = q
        self.pivots += 1

    def run(self, z_rows, allowed, max_pivots):
        """Minimize the objective in ``z_rows[0]``.  Returns OPTIMAL or UNBOUNDED."""
        degenerate = 0
        while True:
            z = z_rows[0][0]
            if degenerate >= DEGENERATE_SWITCH:
                q = next((j for j in allowed if z[j] < 0), None)
            else:
                q, best = None, 0
                for j in allowed:
                    if z[j] < best:
                        q, best = j, z[j]
            if q is None:
                return OPTIMAL
            p = None
            for i, r in enumerate(self.rows):
                a = r[q]
                if a <= 0:
                    continue
                if p is None:
                    p = i
                    continue
                pr = self.rows[p]
                lhs, rhs = r[-1] * pr[q], pr[-1] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[p]):
                    p = i
            if p is None:
                return UNBOUNDED
            degenerate = degenerate + 1 if self.rows[p][-1] == 0 else 0
            self.pivot(p, q, z_rows)
            if max_pivots is not None and self.pivots > max_pivots:
                raise RuntimeError("simplex pivot limit exceeded")

    def solution(self):
        x = [Fraction(0)] * self.ncols
        for i, j in enumerate(self.basis):
            x[j] = Fraction(self.rows[i][-1], self.dens[i])
        return x

    def multipliers(self, z_row, art_cost):
        """Simplex multipliers in the orientation of the input rows, read off
        the reduced costs of the artificial columns (one per row)."""
        z, den = z_row
        out = []
        for i in range(len(self.flipped)):
            pi = art_cost - Fraction(z[self.n + i], den)
            out.append(-pi if self.flipped[i] else pi)
        return out


def _reduce(row, den):
    g = math.gcd(den, *row)
    if g > 1:
        return [v // g for v in row], den // g
    return row, den


def solve_standard(A: Sequence[Sequence[int]], b: Sequence[int], c: Sequence[int] | None = None,
                   *, max_pivots: int | None = None, duals: bool = False) -> LPResult:
    """Minimize ``c . x`` subject to ``A x = b``, ``x >= 0`` (integer data).

    With ``c=None`` only feasibility is decided.  With ``duals=True`` every
    row gets its own artificial column, kept until the end, so the optimal
    simplex multipliers (``dual``) or a Farkas certificate of infeasibility
    (``farkas``) can be read off exactly.
    """
    m = len(A)
    n = len(A[0]) if m else (len(c) if c is not None else 0)
    if m == 0:
        if c is not None and any(v < 0 for v in c):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, [Fraction(0)] * n, Fraction(0), dual=[])
    T = _Tableau(A, b, n, reuse_units=not duals)
    art = set(range(n, T.ncols))
    if art:
        cost = [0] * n + [1] * (T.ncols - n)
        z_rows = [T.objective_row(cost)]
        T.run(z_rows, [j for j in range(T.ncols)], max_pivots)
        z, zd = z_rows[0]
        if z[-1] != 0:
            farkas = T.multipliers(z_rows[0], 1) if duals else None
            return LPResult(INFEASIBLE, pivots=T.pivots, farkas=farkas)
        # drive artificial columns out of the basis
        i = 0
        while i < len(T.rows):
            if T.basis[i] in art:
                q = next((j for j in range(n) if T.rows[i][j]), None)
                if q is None:
                    if duals:
                        # redundant row: the artificial stays basic at level 0
                        i += 1
                        continue
                    del T.rows[i], T.dens[i], T.basis[i]
                    continue
                T.pivot(i, q, [])
            i += 1
        if not duals:
            T.rows = [r[:n] + [r[-1]] for r in T.rows]
            T.ncols = n
    if c is None:
        x = T.solution()[:n]
        dual = [Fraction(0)] * m if duals else None
        return LPResult(OPTIMAL, x, Fraction(0), T.pivots, dual=dual)
    z_rows = [T.objective_row(list(c) + [0] * (T.ncols - n))]
    status = T.run(z_rows, list(range(n)), max_pivots)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=T.pivots)
    x = T.solution()[:n]
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x) if cj), Fraction(0))
    dual = T.multipliers(z_rows[0], 0) if duals else None
    return LPResult(OPTIMAL, x, value, T.pivots, dual=dual)


# -- system level helpers ----------------------------------------------------------


def _reduced_problem(system: LinIneqSystem):
    """Reduce a system modulo its equalities.

    Returns ``(free_cols, ineq_rows, eq_rows, pivots)`` where ``ineq_rows`` are
    the inequalities restricted to the non-pivot columns.
    """
    eqs, pivots = rref(system.eqs, system.dim)
    piv = set(pivots)
    free = [j for j in range(system.dim) if j not in piv]
    rows = []
    for r in system.ineqs:
        rr = reduce_modulo(r, eqs, pivots)
        rows.append(tuple(rr[j] for j in free) + (rr[-1],))
    return free, rows, eqs, pivots


def implied_rows(rows: Sequence[Row], target: Row) -> bool:
    """Whether ``target`` (a . x >= b) follows from ``rows`` over free x.

    Assumes the system given by ``rows`` is feasible.  Farkas: the target is
    implied iff ``target.a = sum y_i a_i`` with ``y >= 0`` and ``sum y_i b_i >=
    target.b``.
    """
    d = len(target) - 1
    if not any(target[:d]):
        return target[-1] <= 0
    A = [[r[j] for r in rows] for j in range(d)]
    b = [target[j] for j in range(d)]
    if not rows:
        return False
    if all(r[-1] == 0 for r in rows) and target[-1] <= 0:
        return solve_standard(A, b).status == OPTIMAL
    # maximize sum y_i b_i  ==  minimize -sum y_i b_i
    res = solve_standard(A, b, [-r[-1] for r in rows])
    if res.status == INFEASIBLE:
        return False
    if res.status == UNBOUNDED:
        return True
    return -res.value >= target[-1]


@dataclass
class MinResult:
    status: str
    point: list | None = None   # optimal point (OPTIMAL)
    value: Fraction | None = None
    ray: list | None = None     # a.ray >= 0 for all rows, obj.ray < 0 (UNBOUNDED)
    mult: list | None = None    # y >= 0 with sum y_i a_i = obj (OPTIMAL)


def lp_min(rows: Sequence[Row], obj: Sequence[int]) -> MinResult:
    """Minimize ``obj . w`` over ``{w : a . w >= b for (a, b) in rows}``.

    Solved through the dual ``max sum y_i b_i, sum y_i a_i = obj, y >= 0``;
    the point comes from the optimal multipliers and an unbounded direction
    from the phase-one Farkas certificate.  The rows are assumed feasible:
    an UNBOUNDED answer only means no finite lower bound exists.
    """
    d = len(obj)
    if not rows:
        if any(obj):
            return MinResult(UNBOUNDED, ray=[Fraction(-v) for v in obj])
        return MinResult(OPTIMAL, [Fraction(0)] * d, Fraction(0), mult=[])
    A = [[r[j] for r in rows] for j in range(d)]
    res = solve_standard(A, list(obj), [-r[-1] for r in rows], duals=True)
    if res.status == INFEASIBLE:
        return MinResult(UNBOUNDED, ray=[-v for v in res.farkas])
    if res.status == UNBOUNDED:
        return MinResult(INFEASIBLE)
    w = [-v for v in res.dual]
    return MinResult(OPTIMAL, w, -res.value, mult=res.x)


def implies(system: LinIneqSystem, row: Sequence, *, equality: bool = False) -> bool:
    """Whether every point of ``system`` satisfies ``row`` (exact).

    An infeasible system implies everything.
    """
    if len(row) != system.dim + 1:
        raise ValueError("row dimension mismatch")
    if system.infeasible or not is_feasible(system):
        return True
    eqs, pivots = rref(system.eqs, system.dim)
    piv = set(pivots)
    free = [j for j in range(system.dim) if j not in piv]
    ineq = [reduce_modulo(r, eqs, pivots) for r in system.ineqs]
    ineq = [tuple(r[j] for j in free) + (r[-1],) for r in ineq]
    targets = [tuple(row)] + ([tuple(-v for v in row)] if equality else [])
    for t in targets:
        t = reduce_modulo(normalize_row(t), eqs, pivots)
        t = tuple(t[j] for j in free) + (t[-1],)
        if not implied_rows(ineq, t):
            return False
    return True


def is_feasible(system: LinIneqSystem) -> bool:
    """Exact feasibility via the dual: infeasible iff some ``y >= 0`` has
    ``sum y_i a_i = 0`` and ``sum y_i b_i > 0`` (after substituting the
    equalities)."""
    if system.infeasible:
        return False
    if system.is_homogeneous:
        return True
    try:
        eqs, pivots = rref(system.eqs, system.dim)
    except ValueError:
        return False
    piv = set(pivots)
    free = [j for j in range(system.dim) if j not in piv]
    rows = [reduce_modulo(r, eqs, pivots) for r in system.ineqs]
    if not rows:
        return True
    A = [[r[j] for r in rows] for j in free]
    res = solve_standard(A, [0] * len(free), [-r[-1] for r in rows])
    return res.status == OPTIMAL


def optimize(system: LinIneqSystem, objective: Sequence, *, maximize: bool = False,
             nonneg: bool = False) -> LPResult:
    """Optimize a linear objective over a system with free (or, with
    ``nonneg=True``, nonnegative) variables.  ``x`` in the result is given in
    the system's coordinates."""
    n = system.dim
    if system.infeasible:
        return LPResult(INFEASIBLE)
    obj = [Fraction(v) for v in objective]
    if maximize:
        obj = [-v for v in obj]
    den = 1
    for v in obj:
        den = den * v.denominator // math.gcd(den, v.denominator)
    cobj = [int(v * den) for v in obj]
    k = len(system.ineqs)
    A, b = [], []
    # columns: x (n or 2n) then one surplus per inequality
    width = n if nonneg else 2 * n
    for idx, r in enumerate(system.ineqs):
        row = list(r[:-1]) if nonneg else list(r[:-1]) + [-v for v in r[:-1]]
        s = [0] * k
        s[idx] = -1
        A.append(row + s)
        b.append(r[-1])
    for r in system.eqs:
        row = list(r[:-1]) if nonneg else list(r[:-1]) + [-v for v in r[:-1]]
        A.append(row + [0] * k)
        b.append(r[-1])
    c = (cobj if nonneg else cobj + [-v for v in cobj]) + [0] * k
    if not A:
        if any(cobj):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, [Fraction(0)] * n, Fraction(0))
    res = solve_standard(A, b, c)
    if res.status != OPTIMAL:
        return LPResult(res.status, pivots=res.pivots)
    xs = res.x[:width]
    x = xs if nonneg else [xs[j] - xs[n + j] for j in range(n)]
    value = sum((Fraction(v) * xv for v, xv in zip(objective, x)), Fraction(0))
    return LPResult(OPTIMAL, x, value, res.pivots)


def feasible_point(system: LinIneqSystem, *, nonneg: bool = False):
    """A rational point of the system, or ``None`` when infeasible."""
    if system.infeasible:
        return None
    n = system.dim
    k = len(system.ineqs)
    A, b = [], []
    for idx, r in enumerate(system.ineqs):
        row = list(r[:-1]) if nonneg else list(r[:-1]) + [-v for v in r[:-1]]
        s = [0] * k
        s[idx] = -1
        A.append(row + s)
        b.append(r[-1])
    for r in system.eqs:
        row = list(r[:-1]) if nonneg else list(r[:-1]) + [-v for v in r[:-1]]
        A.append(row + [0] * k)
        b.append(r[-1])
    if not A:
        return [Fraction(0)] * n
    res = solve_standard(A, b)
    if res.status != OPTIMAL:
        return None
    xs = res.x
    return xs[:n] if nonneg else [xs[j] - xs[n + j] for j in range(n)]


def in_projection(system: LinIneqSystem, fixed: dict, *, nonneg: bool = False) -> bool:
    """Whether the point ``fixed`` (coord -> value) lifts to a point of ``system``.

    The fixed coordinates are substituted and the remaining ones are free
    (or nonnegative with ``nonneg=True``).
    """
    idx = {c: i for i, c in enumerate(system.coords)}
    fixed_pos = {idx[c]: Fraction(v) for c, v in fixed.items()}
    rest = [c for c in system.coords if idx[c] not in fixed_pos]
    rest_pos = [idx[c] for c in rest]

    def sub(r):
        rhs = Fraction(r[-1]) - sum(r[j] * v for j, v in fixed_pos.items())
        return [r[j] for j in rest_pos] + [rhs]

    lifted = LinIneqSystem(tuple(rest), tuple(sub(r) for r in system.ineqs),
                           tuple(sub(r) for r in system.eqs), system.infeasible)
    if lifted.infeasible:
        return False
    if not rest:
        return lifted.contains([])
    if not nonneg:
        return is_feasible(lifted)
    return feasible_point(lifted, nonneg=True) is not None


def in_cone_hull(rays: Sequence[Sequence], r: Sequence) -> bool:
    """Whether ``r`` is a nonnegative combination of ``rays`` (exact LP)."""
    if not rays:
        return not any(r)
    d = len(r)
    den = 1
    vecs = [list(map(Fraction, v)) for v in rays] + [list(map(Fraction, r))]
    for v in vecs:
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
    A = [[int(v[j] * den) for v in vecs[:-1]] for j in range(d)]
    b = [int(vecs[-1][j] * den) for j in range(d)]
    return solve_standard(A, b).status == OPTIMAL

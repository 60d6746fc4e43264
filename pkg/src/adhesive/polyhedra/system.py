"""Exact linear inequality systems over named coordinates.

A row is stored as a tuple of Python ints ``(a_1, ..., a_n, b)``.  For an
inequality it means ``a . x >= b``, for an equality ``a . x == b``.  Rows are
kept integral: rational input is scaled by the lcm of its denominators and
divided by the gcd of its entries.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Row = tuple  # tuple[int, ...], last entry is the right-hand side


def normalize_row(values: Sequence, *, equality: bool = False) -> Row:
    """Integral, gcd-reduced form of a rational row.

    Equalities additionally get their first nonzero coefficient positive.
    """
    fr = [v if isinstance(v, int) else Fraction(v) for v in values]
    den = 1
    for v in fr:
        if isinstance(v, Fraction) and v.denominator != 1:
            den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in fr]
    g = math.gcd(*ints)
    if g > 1:
        ints = [v // g for v in ints]
    if equality:
        for v in ints[:-1]:
            if v:
                if v < 0:
                    ints = [-w for w in ints]
                break
    return tuple(ints)


def _row_is_zero(row: Row) -> bool:
    return not any(row[:-1])


def rref(rows: Iterable[Row], ncols: int, pivot_order: Sequence[int] | None = None):
    """Integer reduced row echelon form of a set of equality rows.

    Returns ``(rows, pivots)`` where ``rows[k]`` has pivot column
    ``pivots[k]``, each row is gcd-normalized with a positive pivot, and no
    other row has a nonzero entry in a pivot column.  Raises ``ValueError``
    for an inconsistent row ``0 = b`` with ``b != 0``.
    """
    order = list(range(ncols)) if pivot_order is None else list(pivot_order)
    work = [list(r) for r in rows]
    out: list[list[int]] = []
    pivots: list[int] = []
    for col in order:
        idx = next((i for i, r in enumerate(work) if r[col]), None)
        if idx is None:
            continue
        piv = work.pop(idx)
        if piv[col] < 0:
            piv = [-v for v in piv]
        piv = _gcd_reduce(piv)
        work = [_eliminate(r, piv, col) for r in work]
        out = [_eliminate(r, piv, col) for r in out]
        out.append(piv)
        pivots.append(col)
    for r in work:
        if any(r[:-1]):  # pragma: no cover - every column was visited
            raise AssertionError("rref left a nonzero row")
        if r[-1]:
            raise ValueError("inconsistent equality system")
    return [tuple(r) for r in out], pivots


def _gcd_reduce(row):
    g = math.gcd(*row)
    return [v // g for v in row] if g > 1 else list(row)


def _eliminate(row, piv, col):
    """Remove ``col`` from ``row`` using pivot row ``piv`` (positive pivot)."""
    c = row[col]
    if not c:
        return row
    p = piv[col]
    new = [p * a - c * b for a, b in zip(row, piv)]
    return _gcd_reduce(new) if any(new) else new


def reduce_modulo(row: Row, eq_rows: Sequence[Row], pivots: Sequence[int]) -> Row:
    """Eliminate equality pivot columns from an inequality row.

    The multiplier applied to ``row`` is always positive so the direction of
    the inequality is preserved.
    """
    r = list(row)
    for piv, col in zip(eq_rows, pivots):
        r = _eliminate(r, piv, col)
    return tuple(_gcd_reduce(r)) if any(r) else tuple(r)


@dataclass(frozen=True)
class LinIneqSystem:
    """Inequalities ``a . x >= b`` and equalities ``a . x == b`` over ``coords``."""

    coords: tuple
    ineqs: tuple = ()
    eqs: tuple = ()
    infeasible: bool = False
    meta: Mapping = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.coords)
        if len(set(self.coords)) != n:
            raise ValueError("duplicate coordinate labels")
        ineqs, eqs = [], []
        seen_i, seen_e = set(), set()
        infeasible = self.infeasible
        for r in self.ineqs:
            if len(r) != n + 1:
                raise ValueError(f"row length {len(r)} != {n + 1}")
            r = normalize_row(r)
            if _row_is_zero(r):
                if r[-1] > 0:
                    infeasible = True
                continue
            if r not in seen_i:
                seen_i.add(r)
                ineqs.append(r)
        for r in self.eqs:
            if len(r) != n + 1:
                raise ValueError(f"row length {len(r)} != {n + 1}")
            r = normalize_row(r, equality=True)
            if _row_is_zero(r):
                if r[-1] != 0:
                    infeasible = True
                continue
            if r not in seen_e:
                seen_e.add(r)
                eqs.append(r)
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "ineqs", tuple(ineqs))
        object.__setattr__(self, "eqs", tuple(eqs))
        object.__setattr__(self, "infeasible", infeasible)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_dicts(cls, coords, ineqs=(), eqs=(), **kw) -> "LinIneqSystem":
        """Build from rows given as ``({coord: coeff}, rhs)`` pairs."""
        index = {c: i for i, c in enumerate(coords)}

        def dense(spec):
            coeffs, rhs = spec
            row = [Fraction(0)] * (len(coords) + 1)
            for c, v in coeffs.items():
                row[index[c]] += Fraction(v)
            row[-1] = Fraction(rhs)
            return row

        return cls(tuple(coords), tuple(dense(s) for s in ineqs), tuple(dense(s) for s in eqs), **kw)

    def with_rows(self, ineqs=(), eqs=()) -> "LinIneqSystem":
        return LinIneqSystem(self.coords, self.ineqs + tuple(ineqs), self.eqs + tuple(eqs),
                             self.infeasible, self.meta)

    def embed(self, coords: Sequence[str]) -> "LinIneqSystem":
        """Same rows expressed over a superset (or reordering) of coordinates."""
        coords = tuple(coords)
        index = {c: i for i, c in enumerate(coords)}
        missing = [c for c in self.coords if c not in index]
        if missing:
            raise ValueError(f"coordinates not in target space: {missing}")
        pos = [index[c] for c in self.coords]

        def move(r):
            out = [0] * (len(coords) + 1)
            for p, v in zip(pos, r):
                out[p] = v
            out[-1] = r[-1]
            return tuple(out)

        return LinIneqSystem(coords, tuple(map(move, self.ineqs)), tuple(map(move, self.eqs)),
                             self.infeasible, self.meta)

    # -- queries -----------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_homogeneous(self) -> bool:
        return all(r[-1] == 0 for r in self.ineqs + self.eqs)

    def index(self, coord: str) -> int:
        return self.coords.index(coord)

    def row_dict(self, row: Row) -> dict:
        return {c: v for c, v in zip(self.coords, row) if v}

    def satisfies(self, point: Sequence, row: Row, *, equality: bool = False) -> bool:
        val = sum(Fraction(a) * Fraction(x) for a, x in zip(row, point) if a)
        return val == row[-1] if equality else val >= row[-1]

    def contains(self, point: Sequence) -> bool:
        """Exact membership test of a rational point."""
        if self.infeasible:
            return False
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        return all(self.satisfies(point, r) for r in self.ineqs) and all(
            self.satisfies(point, r, equality=True) for r in self.eqs)

    def canonical(self) -> "LinIneqSystem":
        """Equalities in RREF, inequalities reduced modulo them, rows sorted."""
        if self.infeasible:
            return LinIneqSystem(self.coords, (), (), True, self.meta)
        eqs, pivots = rref(self.eqs, self.dim)
        ineqs = {reduce_modulo(r, eqs, pivots) for r in self.ineqs}
        return LinIneqSystem(self.coords, tuple(sorted(ineqs, key=_row_key)),
                             tuple(sorted(eqs, key=_row_key)), False, self.meta)

    # -- presentation -------------------------------------------------------------

    def format_row(self, row: Row, relation: str = ">=") -> str:
        return format_row(self.coords, row, relation)

    def to_text(self) -> str:
        lines = [self.format_row(r, "=") for r in self.eqs]
        lines += [self.format_row(r, ">=") for r in self.ineqs]
        if self.infeasible:
            lines.insert(0, "# infeasible")
        return "\n".join(lines) + ("\n" if lines else "")

    def to_json(self) -> dict:
        def enc(r):
            return {"coeffs": {c: str(v) for c, v in zip(self.coords, r) if v}, "rhs": str(r[-1])}

        return {
            "coords": list(self.coords),
            "inequalities": [enc(r) for r in self.ineqs],
            "equalities": [enc(r) for r in self.eqs],
            "infeasible": self.infeasible,
        }

    @classmethod
    def from_json(cls, data) -> "LinIneqSystem":
        if isinstance(data, str):
            data = json.loads(data)
        coords = data["coords"]

        def dec(r):
            return ({c: Fraction(v) for c, v in r["coeffs"].items()}, Fraction(r["rhs"]))

        return cls.from_dicts(coords, [dec(r) for r in data.get("inequalities", [])],
                              [dec(r) for r in data.get("equalities", [])],
                              infeasible=bool(data.get("infeasible", False)))


def _row_key(row: Row):
    # first nonzero position, then lexicographic on the entries
    first = next((i for i, v in enumerate(row[:-1]) if v), len(row))
    return (first, tuple(-abs(v) for v in row[:-1]), row)


def format_row(coords: Sequence[str], row: Row, relation: str = ">=") -> str:
    """``2*H(A) - H(A,B) >= 0`` style rendering, terms in coordinate order."""
    parts = []
    for c, v in zip(coords, row[:-1]):
        if not v:
            continue
        mag = abs(v)
        term = c if mag == 1 else f"{mag}*{c}"
        if not parts:
            parts.append(term if v > 0 else f"-{term}")
        else:
            parts.append(("+ " if v > 0 else "- ") + term)
    lhs = " ".join(parts) if parts else "0"
    return f"{lhs} {relation} {row[-1]}"


def intersect(systems: Sequence[LinIneqSystem], *, prune: bool = True) -> LinIneqSystem:
    """Conjunction of systems over identical coordinates."""
    if not systems:
        raise ValueError("nothing to intersect")
    coords = systems[0].coords
    for s in systems[1:]:
        if s.coords != coords:
            raise ValueError("coordinate mismatch in intersect")
    out = LinIneqSystem(coords,
                        tuple(r for s in systems for r in s.ineqs),
                        tuple(r for s in systems for r in s.eqs),
                        any(s.infeasible for s in systems))
    if prune:
        from .fm import lp_remove_redundant

        out = lp_remove_redundant(out)
    return out

"""Double description: extremal rays of a polyhedral cone and back.

Cones are ``{x : A x >= 0, E x = 0}``.  Equalities are applied first and only
shrink the lineality space.  Each inequality is then intersected with the
current (lines, rays) representation; a new ray is formed from a
positive/negative pair only when the two are adjacent, decided by the
combinatorial test on their sets of tight constraints.
"""
from __future__ import annotations

import logging
import math
from typing import Sequence

from .lp import implies
from .system import LinIneqSystem

log = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 24


class DimensionGuard(ValueError):
    pass


def _dot(a, x):
    return sum(u * v for u, v in zip(a, x) if u)


def normalize_ray(r: Sequence[int]) -> tuple:
    g = math.gcd(*r)
    if g == 0:
        raise ValueError("zero ray")
    return tuple(v // g for v in r)


def _normalize_line(r):
    r = normalize_ray(r)
    first = next(v for v in r if v)
    return r if first > 0 else tuple(-v for v in r)


def double_description(eqs: Sequence[Sequence[int]], ineqs: Sequence[Sequence[int]], d: int):
    """``(rays, lines)`` of ``{x in Z^d : e.x = 0, a.x >= 0}`` (integer input).

    Inequalities are processed sparsest first (ties: lexicographically
    largest); the order only affects the size of the intermediate cones.
    """
    ineqs = sorted((tuple(a) for a in ineqs), key=lambda a: (sum(1 for v in a if v), tuple(-v for v in a)))
    lines = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    rays: list = []
    zero: list = []  # bitmask of tight processed inequalities, aligned with rays

    def absorb(a, keep_as_ray, tight=0):
        nonlocal lines, rays
        k = next((i for i, l in enumerate(lines) if _dot(a, l)), None)
        if k is None:
            return False
        l = lines.pop(k)
        al = _dot(a, l)
        if al < 0:
            l, al = tuple(-v for v in l), -al
        lines = [_normalize_line(tuple(al * u - _dot(a, m) * v for u, v in zip(m, l)))
                 if _dot(a, m) else m for m in lines]
        rays = [normalize_ray(tuple(al * u - _dot(a, r) * v for u, v in zip(r, l)))
                if _dot(a, r) else r for r in rays]
        if keep_as_ray:
            # a former line is tight on everything processed before
            rays.append(normalize_ray(l))
            zero.append(tight)
        return True

    rank_e = 0
    for e in eqs:
        # no rays exist yet, so an equality only cuts down the lines
        rank_e += absorb(e, False)
    for idx, a in enumerate(ineqs):
        bit = 1 << idx
        if absorb(a, True, bit - 1):
            # the old rays and the lines now satisfy a.x = 0; the new ray is strict
            for i in range(len(rays) - 1):
                zero[i] |= bit
            continue
        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos + zer]
        new_zero = [zero[i] for i in pos] + [zero[i] | bit for i in zer]
        if neg:
            # a 2-face of the pointed part needs this many tight constraints
            need = d - rank_e - len(lines) - 2
            for p in pos:
                for q in neg:
                    common = zero[p] & zero[q]
                    if bin(common).count("1") < need:
                        continue
                    if any(j != p and j != q and (zero[j] & common) == common for j in range(len(rays))):
                        continue
                    vp, vq = vals[p], -vals[q]
                    r = normalize_ray(tuple(vp * u + vq * v for u, v in zip(rays[q], rays[p])))
                    new_rays.append(r)
                    new_zero.append(common | bit)
        rays, zero = new_rays, new_zero
        log.debug("dd row %d: %d+ %d- %d0 -> %d rays", idx, len(pos), len(neg), len(zer), len(rays))
    return sorted(set(rays)), sorted(set(_normalize_line(l) for l in lines))


def _as_cone(system: LinIneqSystem, max_dim: int):
    if system.infeasible:
        raise ValueError("infeasible system")
    if not system.is_homogeneous:
        raise ValueError("ray enumeration needs a homogeneous system (a cone)")
    if system.dim > max_dim:
        raise DimensionGuard(f"{system.dim} coordinates exceed the ray-enumeration bound {max_dim}")
    return [r[:-1] for r in system.eqs], [r[:-1] for r in system.ineqs]


def cone_generators(system: LinIneqSystem, *, max_dim: int = DEFAULT_MAX_DIM):
    """``(rays, lines)`` of a homogeneous system."""
    eqs, ineqs = _as_cone(system, max_dim)
    return double_description(eqs, ineqs, system.dim)


def enumerate_rays(system: LinIneqSystem, *, max_dim: int = DEFAULT_MAX_DIM,
                   allow_lines: bool = False) -> list:
    """Extremal rays of a pointed cone, gcd-normalized and sorted.

    A cone with a nontrivial lineality space has no extremal rays in the
    usual sense; that is an error unless ``allow_lines`` is set, in which
    case the rays of the representation modulo the lines are returned.
    """
    rays, lines = cone_generators(system, max_dim=max_dim)
    if lines and not allow_lines:
        raise ValueError(f"cone is not pointed (lineality dimension {len(lines)})")
    return rays


def contains_ray(system: LinIneqSystem, r: Sequence) -> bool:
    """Exact evaluation of every row at ``r`` (homogeneous systems)."""
    if len(r) != system.dim:
        raise ValueError("coordinate mismatch")
    if not system.is_homogeneous:
        raise ValueError("contains_ray expects a homogeneous system")
    return system.contains(list(r))


def system_from_rays(coords: Sequence[str], rays: Sequence[Sequence[int]],
                     lines: Sequence[Sequence[int]] = ()) -> LinIneqSystem:
    """Facet description of ``cone(rays) + span(lines)`` (DD on the polar)."""
    d = len(coords)
    eqs = [tuple(l) for l in lines]
    facets, eq_rows = double_description(eqs, [tuple(r) for r in rays], d)
    return LinIneqSystem(tuple(coords), tuple(tuple(f) + (0,) for f in facets),
                         tuple(tuple(e) + (0,) for e in eq_rows)).canonical()


def equivalent(s1: LinIneqSystem, s2: LinIneqSystem) -> bool:
    """Same solution set (exact LP implication in both directions)."""
    if s1.coords != s2.coords:
        raise ValueError("coordinate mismatch")
    for a, b in ((s1, s2), (s2, s1)):
        if any(not implies(a, r) for r in b.ineqs):
            return False
        if any(not implies(a, r, equality=True) for r in b.eqs):
            return False
    return True

"""Exact polyhedral computations: systems, LP, Fourier-Motzkin, double description."""
from .system import LinIneqSystem, Row, format_row, intersect, normalize_row, rref
from .lp import (LPResult, feasible_point, implied_rows, implies, in_cone_hull, in_projection,
                 is_feasible, optimize, solve_standard)
from .fm import DEFAULT_PRUNE_THRESHOLD, fm_eliminate, lp_remove_redundant
from .dd import DimensionGuard, contains_ray, enumerate_rays, equivalent, normalize_ray, system_from_rays

__all__ = [
    "LinIneqSystem", "Row", "format_row", "intersect", "normalize_row", "rref",
    "LPResult", "feasible_point", "implied_rows", "implies", "in_cone_hull", "in_projection",
    "is_feasible", "optimize", "solve_standard",
    "DEFAULT_PRUNE_THRESHOLD", "fm_eliminate", "lp_remove_redundant",
    "DimensionGuard", "contains_ray", "enumerate_rays", "equivalent", "normalize_ray", "system_from_rays",
]

"""Exact retrograde solver for the c-cop game on GP(n, k)."""

from .core import (
    DEFAULT_BUDGET,
    CopNumberResult,
    PlacementResult,
    cop_number,
    cops_win_game,
    fixed_point_violations,
    optimal_cop_policy,
    optimal_robber_placement,
    optimal_robber_policy,
    placement_game,
    solve,
    solve_cached,
    state_count,
)
from .table import Symmetry, WinTable, canonicalize, orbit

__all__ = [
    "DEFAULT_BUDGET",
    "CopNumberResult",
    "PlacementResult",
    "Symmetry",
    "WinTable",
    "canonicalize",
    "cop_number",
    "cops_win_game",
    "fixed_point_violations",
    "optimal_cop_policy",
    "optimal_robber_placement",
    "optimal_robber_policy",
    "orbit",
    "placement_game",
    "solve",
    "solve_cached",
    "state_count",
]

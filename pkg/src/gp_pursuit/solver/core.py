from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numba
import numpy as np

from ..errors import BudgetError, ExceedsMax, ParamError
from ..game import MAX_COPS, GameState, Turn, cop_moves, robber_moves
from ..graph import GPGraph
from ..ranking import binomial_table, multiset_count, unrank
from . import kernels
from .table import CacheError, Symmetry, WinTable, cache_path

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 8 << 30


def available_threads() -> int:
    return int(numba.config.NUMBA_NUM_THREADS)


def state_count(n: int, c: int, symmetry: Symmetry) -> int:
    R = 2 if symmetry else 2 * n
    return multiset_count(2 * n, c) * R * 2


def memory_estimate(n: int, c: int, symmetry: Symmetry) -> int:
    """Peak bytes: win + distance + queue per state, a counter per slot."""
    S = state_count(n, c, symmetry)
    return S * (1 + 2 + 8) + S // 2


def solve(
    g: GPGraph,
    c: int,
    symmetry: Symmetry | bool = True,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
    with_distance: bool = True,
) -> WinTable:
    """Cop-win table of the c-cop game on ``g``.

    ``threads == 1`` runs the serial counter-based BFS; more threads run the
    level-synchronous engine.  Both produce the same table.
    """
    if not 1 <= c <= MAX_COPS:
        raise ParamError(f"cop count must be in 1..{MAX_COPS}, got {c}")
    if threads < 1:
        raise ParamError("threads must be positive")
    symmetry = Symmetry(int(symmetry))
    need = memory_estimate(g.n, c, symmetry)
    if need > budget:
        raise BudgetError(f"solve needs ~{need / 2**30:.2f} GiB, budget is {budget / 2**30:.2f} GiB")
    M = multiset_count(g.order, c)
    binom = binomial_table(g.order, c)
    closed = np.ascontiguousarray(g.closed, dtype=np.int64)
    sym = bool(symmetry)
    t0 = time.perf_counter()
    if threads == 1:
        win, dist, layers = kernels.solve_queue(closed, g.n, c, sym, binom, M)
        engine = "queue"
    else:
        workers = min(threads, available_threads())
        prev = numba.get_num_threads()
        numba.set_num_threads(workers)
        try:
            win, dist, layers = kernels.solve_frontier(closed, g.n, c, sym, binom, M)
        finally:
            numba.set_num_threads(prev)
        engine = "frontier"
        threads = workers
    elapsed = time.perf_counter() - t0
    stats = {
        "states": int(len(win)),
        "iterations": int(layers),
        "seconds": round(elapsed, 3),
        "engine": engine,
        "threads": threads,
    }
    log.info("solved GP(%d,%d) c=%d %s: %s", g.n, g.k, c, symmetry.name, stats)
    table = WinTable(
        g.n, g.k, c, symmetry,
        np.packbits(win, bitorder="little"),
        dist if with_distance else None,
        stats,
    )
    table._win = win
    table._graph = g
    return table


def fixed_point_violations(t: WinTable) -> int:
    if t.distance is None:
        raise ParamError("fixed-point audit needs capture distances")
    g = t.graph
    M = multiset_count(g.order, t.c)
    return int(
        kernels.fixed_point_violations(
            t.win, t.distance, np.ascontiguousarray(g.closed), g.n, t.c,
            bool(t.symmetry), binomial_table(g.order, t.c), M,
        )
    )


def solve_cached(
    g: GPGraph,
    c: int,
    symmetry: Symmetry | bool = True,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
    cache_dir: Path | str | None = None,
) -> tuple[WinTable, bool]:
    """:func:`solve`, loading from / saving to ``cache_dir`` when given.

    Returns the table and whether it came from the cache.
    """
    symmetry = Symmetry(int(symmetry))
    if cache_dir is None:
        return solve(g, c, symmetry, threads, budget), False
    path = cache_path(Path(cache_dir), g.n, g.k, c, symmetry)
    if path.exists():
        try:
            t = WinTable.load(path)
            if (t.n, t.k, t.c, t.symmetry) == (g.n, g.k, c, symmetry):
                t._graph = g
                t.stats = {"states": t.size, "cache": str(path)}
                return t, True
        except CacheError as exc:
            log.warning("ignoring cache %s: %s", path, exc)
    t = solve(g, c, symmetry, threads, budget)
    t.save(path)
    return t, False


@dataclass
class PlacementResult:
    cops_win: bool
    placement: tuple[int, ...] | None  # lowest-rank winning cop placement
    escapes: np.ndarray = field(repr=False)  # per placement rank: robber escape vertex or -1


def placement_game(t: WinTable) -> PlacementResult:
    g = t.graph
    M = multiset_count(g.order, t.c)
    esc = kernels.placement_scan(t.win, g.n, t.c, bool(t.symmetry), binomial_table(g.order, t.c), M)
    winners = np.flatnonzero(esc < 0)
    placement = unrank(int(winners[0]), g.order, t.c) if len(winners) else None
    return PlacementResult(bool(len(winners)), placement, esc)


def cops_win_game(g: GPGraph, c: int, symmetry=True, threads: int = 1, budget: int = DEFAULT_BUDGET) -> bool:
    """Some cop placement beats every robber placement."""
    return placement_game(solve(g, c, symmetry, threads, budget)).cops_win


@dataclass
class CopNumberResult:
    cop_number: int
    per_c: list = field(default_factory=list)
    assumed_upper: bool = False
    cache_hits: int = 0


def cop_number(
    g: GPGraph,
    max_c: int = MAX_COPS,
    symmetry=True,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
    cache_dir=None,
    assume_upper_4: bool = False,
) -> CopNumberResult:
    """Least c <= max_c for which the cops win the placement game.

    With ``assume_upper_4`` the four-cop solve is skipped and the known
    upper bound of 4 for every GP graph is used once three cops lose.
    """
    if not 1 <= max_c <= MAX_COPS:
        raise ParamError(f"max_c must be in 1..{MAX_COPS}")
    res = CopNumberResult(0)
    for c in range(1, max_c + 1):
        if c == 4 and assume_upper_4:
            res.cop_number = 4
            res.assumed_upper = True
            res.per_c.append({"c": 4, "cops_win": True, "assumed": True})
            return res
        t, hit = solve_cached(g, c, symmetry, threads, budget, cache_dir)
        res.cache_hits += hit
        pg = placement_game(t)
        res.per_c.append({"c": c, "cops_win": pg.cops_win, "cache_hit": hit, "checksum": t.checksum(), **t.stats})
        if pg.cops_win:
            res.cop_number = c
            return res
    raise ExceedsMax(f"{max_c} cops do not suffice on GP({g.n},{g.k})")


# ---------------------------------------------------------------------------
# policies


def _sum_distance(g: GPGraph, cops, robber) -> int:
    row = g.distances_from(robber)
    return int(sum(row[c] for c in cops))


def optimal_cop_policy(t: WinTable, s: GameState) -> tuple[int, ...]:
    """From a cop-win state: the reply with the least capture distance.
    From a lost state: the reply minimising total distance to the robber.
    Ties go to the lexicographically smallest multiset."""
    g = t.graph
    best_key, best = None, None
    for cops in cop_moves(g, s):
        nxt = GameState(cops, s.robber, Turn.ROBBER)
        if s.robber in cops:
            key = (0, 0, cops)
        elif t.copwin(nxt):
            d = t.capture_distance(nxt)
            key = (0, d if d is not None else 0, cops)
        else:
            key = (1, _sum_distance(g, cops, s.robber), cops)
        if best_key is None or key < best_key:
            best_key, best = key, cops
    return best


def optimal_robber_policy(t: WinTable, s: GameState) -> int:
    """Lowest-id move to a state the cops cannot win; if none exists, the
    move that delays capture longest (lowest id on ties)."""
    moves = sorted(robber_moves(t.graph, s))
    best_key, best = None, None
    for v in moves:
        nxt = GameState(s.cops, v, Turn.COPS)
        if v in s.cops:
            key = (1, 0, v)
        elif not t.copwin(nxt):
            key = (0, 0, v)
        else:
            d = t.capture_distance(nxt)
            key = (1, -(d or 0), v)
        if best_key is None or key < best_key:
            best_key, best = key, v
    return best


def optimal_robber_placement(t: WinTable, cops) -> int:
    """Lowest-id start vertex the cops cannot win from, else the one that
    delays capture longest."""
    g = t.graph
    best_key, best = None, None
    for v in range(g.order):
        if v in cops:
            continue
        s = GameState(tuple(cops), v, Turn.COPS)
        key = (0, 0, v) if not t.copwin(s) else (1, -(t.capture_distance(s) or 0), v)
        if best_key is None or key < best_key:
            best_key, best = key, v
    return best


def default_threads() -> int:
    return max(1, min(os.cpu_count() or 1, available_threads()))

"""Self-play of the evasion strategy against several cop policies."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import GameState, Turn, is_capture, is_trapped
from .graph import GPGraph
from .ranking import multiset_count, unrank_many
from .strategy import Case, classify_batch, initial_placement, safe_move, safe_move_batch, tables


@dataclass
class SurvivalReport:
    policy: str
    games: int
    plies: int
    captures: int = 0
    trapped: int = 0
    strategy_failures: int = 0
    history: list = field(default_factory=list, repr=False)

    @property
    def clean(self) -> bool:
        return self.captures == 0 and self.trapped == 0 and self.strategy_failures == 0


def _cop_step(g: GPGraph, dist: np.ndarray, cops, robbers, policy: str, rng):
    N, c = cops.shape
    opts = g.closed[cops]  # (N, c, 4)
    if policy == "random":
        pick = rng.integers(0, 4, size=(N, c))
    else:
        d = dist[opts, robbers[:, None, None]].astype(float)
        pick = np.argmin(d + rng.random(d.shape) * 0.5, axis=2)
    moved = np.take_along_axis(opts, pick[:, :, None], axis=2)[:, :, 0]
    return np.sort(moved, axis=1)


def simulate_batch(
    g: GPGraph, games: int, plies: int, policy: str = "random", c: int = 3, seed: int = 0
) -> SurvivalReport:
    """Play ``games`` independent games of ``plies`` plies (cop and robber
    moves each count as one), robber using placement plus strategy moves.

    ``policy`` is ``"random"`` (each cop picks uniformly among stay and its
    three neighbours) or ``"greedy"`` (each cop steps to a vertex closest to
    the robber, ties broken at random).
    """
    if policy not in ("random", "greedy"):
        raise ValueError(f"unknown cop policy {policy!r}")
    t = tables(g)
    rng = np.random.default_rng(seed)
    cops = unrank_many(rng.integers(0, multiset_count(g.order, c), size=games), g.order, c)
    robbers = np.array([initial_placement(g, tuple(row)) for row in cops], dtype=np.int64)
    rep = SurvivalReport(policy, games, plies)
    alive = np.ones(games, dtype=bool)
    for ply in range(plies):
        if ply % 2 == 0:
            cops[alive] = _cop_step(g, t.dist, cops[alive], robbers[alive], policy, rng)
            caught = alive & (cops == robbers[:, None]).any(axis=1)
            rep.captures += int(caught.sum())
            alive &= ~caught
        else:
            idx = np.flatnonzero(alive)
            kind, slot = classify_batch(t, robbers[idx], cops[idx])
            rep.trapped += int((kind == Case.TRAPPED).sum())
            rep.strategy_failures += int((kind == Case.CASE3).sum())
            moves = safe_move_batch(t, robbers[idx], kind, slot)
            ok = moves >= 0
            robbers[idx[ok]] = moves[ok]
            alive[idx[~ok]] = False
    return rep


def play_vs_solver(g: GPGraph, table, plies: int, start_cops=None) -> SurvivalReport:
    """Strategy robber against the solver's cop policy, one game."""
    from .solver import optimal_cop_policy
    from .strategy import ideal_configurations

    cops = tuple(start_cops) if start_cops is not None else ideal_configurations(g, 0)[0]
    robber = initial_placement(g, cops)
    rep = SurvivalReport("optimal", 1, plies)
    s = GameState(cops, robber, Turn.COPS)
    rep.history.append(s)
    for ply in range(plies):
        if s.to_move is Turn.COPS:
            s = GameState(optimal_cop_policy(table, s), s.robber, Turn.ROBBER)
            if is_capture(s):
                rep.captures += 1
                break
            if is_trapped(g, s):
                rep.trapped += 1
                break
        else:
            s = GameState(s.cops, safe_move(g, s), Turn.COPS)
        rep.history.append(s)
    return rep

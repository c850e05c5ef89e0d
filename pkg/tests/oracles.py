"""Slow, independent reference implementations used only by the tests.

None of these import the package's graph, ranking or solver code: the
graph is rebuilt from the edge rules and games are solved by plain
fixed-point iteration over explicit state dictionaries.
"""

from __future__ import annotations

import itertools

import numpy as np


def edge_set(n: int, k: int) -> set[frozenset]:
    """a_i -> i, b_i -> n + i."""
    edges = set()
    for i in range(n):
        edges.add(frozenset((i, (i + 1) % n)))
        edges.add(frozenset((i, n + i)))
        edges.add(frozenset((n + i, n + (i + k) % n)))
    return edges


def neighbour_sets(n: int, k: int) -> list[set[int]]:
    nb = [set() for _ in range(2 * n)]
    for e in edge_set(n, k):
        u, v = tuple(e)
        nb[u].add(v)
        nb[v].add(u)
    return nb


def floyd_warshall(n: int, k: int) -> np.ndarray:
    V = 2 * n
    d = np.full((V, V), 10**6, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for e in edge_set(n, k):
        u, v = tuple(e)
        d[u, v] = d[v, u] = 1
    for w in range(V):
        d = np.minimum(d, d[:, [w]] + d[[w], :])
    return d


def girth_by_cycles(n: int, k: int, limit: int = 9) -> int | None:
    """Shortest simple cycle found by depth-first path enumeration."""
    nb = neighbour_sets(n, k)
    best = None
    for start in range(2 * n):
        stack = [(start, (start,))]
        while stack:
            v, path = stack.pop()
            if best is not None and len(path) >= best:
                continue
            for w in nb[v]:
                if w == start and len(path) >= 3:
                    best = len(path) if best is None else min(best, len(path))
                elif w > start and w not in path and len(path) < limit:
                    stack.append((w, path + (w,)))
    return best


def brute_force_game(n: int, k: int, c: int):
    """Naive minimax on every (sorted cop tuple, robber, turn) state.

    Returns ``(win, dist)`` dicts: ``win[s]`` is True when the cops force
    capture, ``dist[s]`` the capture distance in plies under optimal play.
    Turn 0 is cops to move, 1 robber to move.
    """
    nb = neighbour_sets(n, k)
    closed = [sorted({v} | nb[v]) for v in range(2 * n)]
    V = 2 * n
    cop_sets = list(itertools.combinations_with_replacement(range(V), c))
    states = [(cs, r, t) for cs in cop_sets for r in range(V) for t in (0, 1)]
    succ = {}
    for cs, r, t in states:
        if t == 0:
            moves = {tuple(sorted(p)) for p in itertools.product(*(closed[x] for x in cs))}
            succ[(cs, r, 0)] = [(m, r, 1) for m in moves]
        else:
            succ[(cs, r, 1)] = [(cs, w, 0) for w in closed[r]]
    dist = {s: 0 for s in states if s[1] in s[0]}
    step = 0
    while True:
        step += 1
        new = {}
        for s in states:
            if s in dist:
                continue
            ds = [dist.get(x) for x in succ[s]]
            if s[2] == 0:
                if any(d is not None for d in ds):
                    new[s] = step
            elif all(d is not None for d in ds):
                new[s] = step
        if not new:
            break
        dist.update(new)
    win = {s: s in dist for s in states}
    return win, dist


def brute_force_cops_win(n: int, k: int, c: int, win=None) -> bool:
    """Some placement beats every robber start (robber places second)."""
    if win is None:
        win, _ = brute_force_game(n, k, c)
    V = 2 * n
    for cs in itertools.combinations_with_replacement(range(V), c):
        if all(win[(cs, r, 0)] for r in range(V) if r not in cs):
            return True
    return False


def brute_force_cop_number(n: int, k: int, max_c: int = 3) -> int | None:
    for c in range(1, max_c + 1):
        if brute_force_cops_win(n, k, c):
            return c
    return None

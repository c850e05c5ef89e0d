"""Numba kernels for retrograde analysis of the c-cop game.

State layout: ``idx = ((m * R) + rs) * 2 + turn`` where ``m`` is the rank of
the cop multiset, ``turn`` is 0 for cops-to-move and 1 for robber-to-move.

Without symmetry ``R = V`` and ``rs`` is the robber's vertex id.  With
dihedral symmetry the robber is rotated to index 0 (``R = 2``, ``rs`` is
the robber's ring) and the cop multiset is the lexicographically smaller of
itself and its reflection, which fixes index 0.  Slots whose multiset is not
canonical are never written.
"""

import os

import numba
import numpy as np
from numba import njit, prange

# The TBB layer warns on version mismatch; workqueue ships with numba.
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"

UNSET = np.uint16(0xFFFF)
DIST_MAX = 0xFFFE


@njit(cache=True)
def sort_small(x, c):
    for i in range(1, c):
        v = x[i]
        j = i - 1
        while j >= 0 and x[j] > v:
            x[j + 1] = x[j]
            j -= 1
        x[j + 1] = v


@njit(cache=True)
def rank_sorted(x, c, binom):
    r = 0
    for i in range(c):
        r += binom[x[i] + i, i + 1]
    return r


@njit(cache=True)
def unrank_into(r, c, binom, out):
    rem = r
    for i in range(c - 1, -1, -1):
        y = i
        while binom[y + 1, i + 1] <= rem:
            y += 1
        rem -= binom[y, i + 1]
        out[i] = y - i


@njit(cache=True)
def shift_vertex(v, t, n):
    if v >= n:
        return n + (v - n + t) % n
    return (v + t) % n


@njit(cache=True)
def reflect_vertex(v, n):
    if v >= n:
        return n + (n - (v - n)) % n
    return (n - v) % n


@njit(cache=True)
def canonical_rank(x, c, n, sym, binom, tmp):
    """Rank of the canonical form of sorted multiset ``x`` (robber at index 0)."""
    if not sym:
        return rank_sorted(x, c, binom)
    for i in range(c):
        tmp[i] = reflect_vertex(x[i], n)
    sort_small(tmp, c)
    for i in range(c):
        if tmp[i] < x[i]:
            return rank_sorted(tmp, c, binom)
        if tmp[i] > x[i]:
            break
    return rank_sorted(x, c, binom)


@njit(cache=True)
def robber_vertex(rs, n, sym):
    if sym:
        return rs * n
    return rs


@njit(cache=True)
def relocate(rs_vertex, u, cops, c, n, sym, binom, out, tmp):
    """Slot index (m * R + rs) after the robber at ``rs_vertex`` steps to ``u``.

    With symmetry the cops are re-anchored so the robber sits at index 0.
    """
    R = 2 if sym else 2 * n
    if sym:
        t = u - n if u >= n else u
        for i in range(c):
            out[i] = shift_vertex(cops[i], -t, n)
        sort_small(out, c)
        m = canonical_rank(out, c, n, sym, binom, tmp)
        return m * R + (1 if u >= n else 0)
    return rank_sorted(cops, c, binom) * R + u


@njit(cache=True)
def contains(cops, c, v):
    for i in range(c):
        if cops[i] == v:
            return True
    return False


@njit(cache=True)
def is_canonical_slot(m, c, n, sym, binom, cops, tmp):
    unrank_into(m, c, binom, cops)
    return canonical_rank(cops, c, n, sym, binom, tmp) == m


@njit(cache=True)
def robber_successors(rs, cops, c, n, sym, closed, binom, out_slots, buf, tmp):
    """Distinct successor slots of a robber-to-move state; returns the count."""
    rv = robber_vertex(rs, n, sym)
    cnt = 0
    for j in range(4):
        s = relocate(rv, closed[rv, j], cops, c, n, sym, binom, buf, tmp)
        dup = False
        for q in range(cnt):
            if out_slots[q] == s:
                dup = True
        if not dup:
            out_slots[cnt] = s
            cnt += 1
    return cnt


@njit(cache=True)
def solve_queue(closed, n, c, sym, binom, M):
    """Serial retrograde BFS with per-state escape counters.

    Returns (win, dist, layers) with ``dist`` counted in plies to capture.
    """
    V = 2 * n
    R = 2 if sym else V
    S = M * R * 2
    win = np.zeros(S, dtype=np.uint8)
    dist = np.full(S, UNSET, dtype=np.uint16)
    counter = np.zeros(M * R, dtype=np.uint8)
    queue = np.empty(S, dtype=np.int64)
    head = 0
    tail = 0
    cops = np.empty(c, dtype=np.int64)
    buf = np.empty(c, dtype=np.int64)
    tmp = np.empty(c, dtype=np.int64)
    succ = np.empty(4, dtype=np.int64)

    for m in range(M):
        if not is_canonical_slot(m, c, n, sym, binom, cops, tmp):
            continue
        for rs in range(R):
            slot = m * R + rs
            if contains(cops, c, robber_vertex(rs, n, sym)):
                for turn in range(2):
                    win[slot * 2 + turn] = 1
                    dist[slot * 2 + turn] = 0
                    queue[tail] = slot * 2 + turn
                    tail += 1
            else:
                counter[slot] = robber_successors(rs, cops, c, n, sym, closed, binom, succ, buf, tmp)

    moved = np.empty(c, dtype=np.int64)
    ncombo = 4 ** c
    layers = 0
    while head < tail:
        s = queue[head]
        head += 1
        d = dist[s]
        if d + 1 > layers:
            layers = d + 1
        nd = d + 1 if d < DIST_MAX else DIST_MAX
        slot = s >> 1
        m = slot // R
        rs = slot % R
        unrank_into(m, c, binom, cops)
        if s & 1:
            # robber-to-move win: every cop position one move back wins
            for code in range(ncombo):
                q = code
                for i in range(c):
                    moved[i] = closed[cops[i], q & 3]
                    q >>= 2
                sort_small(moved, c)
                p = (canonical_rank(moved, c, n, sym, binom, tmp) * R + rs) * 2
                if win[p] == 0:
                    win[p] = 1
                    dist[p] = nd
                    queue[tail] = p
                    tail += 1
        else:
            # cops-to-move win: robber predecessors lose one escape each
            cnt = robber_successors(rs, cops, c, n, sym, closed, binom, succ, buf, tmp)
            for q in range(cnt):
                p = succ[q] * 2 + 1
                if win[p] == 0:
                    counter[succ[q]] -= 1
                    if counter[succ[q]] == 0:
                        win[p] = 1
                        dist[p] = nd
                        queue[tail] = p
                        tail += 1
    return win, dist, layers


@njit(parallel=True, cache=True)
def _expand(frontier, win, cand, closed, n, c, sym, binom, R):
    ncombo = 4 ** c
    for f in prange(len(frontier)):
        s = frontier[f]
        slot = s >> 1
        m = slot // R
        rs = slot % R
        cops = np.empty(c, dtype=np.int64)
        moved = np.empty(c, dtype=np.int64)
        buf = np.empty(c, dtype=np.int64)
        tmp = np.empty(c, dtype=np.int64)
        succ = np.empty(4, dtype=np.int64)
        unrank_into(m, c, binom, cops)
        if s & 1:
            for code in range(ncombo):
                q = code
                for i in range(c):
                    moved[i] = closed[cops[i], q & 3]
                    q >>= 2
                sort_small(moved, c)
                p = (canonical_rank(moved, c, n, sym, binom, tmp) * R + rs) * 2
                if win[p] == 0:
                    cand[p] = 1
        else:
            cnt = robber_successors(rs, cops, c, n, sym, closed, binom, succ, buf, tmp)
            for q in range(cnt):
                p = succ[q] * 2 + 1
                if win[p] == 0:
                    cand[p] = 1


@njit(parallel=True, cache=True)
def _evaluate(cands, win, newwin, closed, n, c, sym, binom, R):
    for f in prange(len(cands)):
        s = cands[f]
        if (s & 1) == 0:
            # only generated from a winning robber-to-move successor
            newwin[f] = 1
            continue
        slot = s >> 1
        cops = np.empty(c, dtype=np.int64)
        buf = np.empty(c, dtype=np.int64)
        tmp = np.empty(c, dtype=np.int64)
        succ = np.empty(4, dtype=np.int64)
        unrank_into(slot // R, c, binom, cops)
        cnt = robber_successors(slot % R, cops, c, n, sym, closed, binom, succ, buf, tmp)
        ok = 1
        for q in range(cnt):
            if win[succ[q] * 2] == 0:
                ok = 0
                break
        newwin[f] = ok


@njit(parallel=True, cache=True)
def _capture_states(mark, n, c, sym, binom, M, R):
    for m in prange(M):
        cops = np.empty(c, dtype=np.int64)
        tmp = np.empty(c, dtype=np.int64)
        if not is_canonical_slot(m, c, n, sym, binom, cops, tmp):
            continue
        for rs in range(R):
            if contains(cops, c, robber_vertex(rs, n, sym)):
                mark[(m * R + rs) * 2] = 1
                mark[(m * R + rs) * 2 + 1] = 1


def solve_frontier(closed, n, c, sym, binom, M):
    """Level-synchronous retrograde analysis; each layer runs in parallel.

    Every layer reads only the previous layers' results, so the output is
    identical for any thread count and equal to :func:`solve_queue`'s.
    """
    V = 2 * n
    R = 2 if sym else V
    S = M * R * 2
    win = np.zeros(S, dtype=np.uint8)
    dist = np.full(S, UNSET, dtype=np.uint16)
    _capture_states(win, n, c, sym, binom, M, R)
    frontier = np.flatnonzero(win)
    dist[frontier] = 0
    cand = np.zeros(S, dtype=np.uint8)
    d = 0
    layers = 1 if len(frontier) else 0
    while len(frontier):
        d += 1
        _expand(frontier, win, cand, closed, n, c, sym, binom, R)
        cands = np.flatnonzero(cand)
        cand[cands] = 0
        newwin = np.zeros(len(cands), dtype=np.uint8)
        _evaluate(cands, win, newwin, closed, n, c, sym, binom, R)
        frontier = cands[newwin.astype(bool)]
        win[frontier] = 1
        dist[frontier] = min(d, DIST_MAX)
        if len(frontier):
            layers = d + 1
    return win, dist, layers


@njit(parallel=True, cache=True)
def fixed_point_violations(win, dist, closed, n, c, sym, binom, M):
    """Re-apply the induction operator to a finished table.

    Counts canonical states whose stored bit or distance disagrees with the
    value recomputed from their successors.
    """
    V = 2 * n
    R = 2 if sym else V
    bad = np.zeros(M, dtype=np.int64)
    ncombo = 4 ** c
    for m in prange(M):
        cops = np.empty(c, dtype=np.int64)
        moved = np.empty(c, dtype=np.int64)
        buf = np.empty(c, dtype=np.int64)
        tmp = np.empty(c, dtype=np.int64)
        succ = np.empty(4, dtype=np.int64)
        if not is_canonical_slot(m, c, n, sym, binom, cops, tmp):
            continue
        for rs in range(R):
            slot = m * R + rs
            if contains(cops, c, robber_vertex(rs, n, sym)):
                for turn in range(2):
                    if win[slot * 2 + turn] != 1 or dist[slot * 2 + turn] != 0:
                        bad[m] += 1
                continue
            # cops to move: win iff some successor wins; distance 1 + min
            best = 0xFFFFFF
            for code in range(ncombo):
                q = code
                for i in range(c):
                    moved[i] = closed[cops[i], q & 3]
                    q >>= 2
                sort_small(moved, c)
                p = (canonical_rank(moved, c, n, sym, binom, tmp) * R + rs) * 2 + 1
                if win[p] and dist[p] < best:
                    best = dist[p]
            s = slot * 2
            if best == 0xFFFFFF:
                if win[s] != 0:
                    bad[m] += 1
            elif win[s] != 1 or dist[s] != min(best + 1, DIST_MAX):
                bad[m] += 1
            # robber to move: win iff every successor wins; distance 1 + max
            cnt = robber_successors(rs, cops, c, n, sym, closed, binom, succ, buf, tmp)
            worst = 0
            allwin = True
            for q in range(cnt):
                p = succ[q] * 2
                if win[p] == 0:
                    allwin = False
                elif dist[p] > worst:
                    worst = dist[p]
            s = slot * 2 + 1
            if not allwin:
                if win[s] != 0:
                    bad[m] += 1
            elif win[s] != 1 or dist[s] != min(worst + 1, DIST_MAX):
                bad[m] += 1
    return bad.sum()


@njit(parallel=True, cache=True)
def placement_scan(win, n, c, sym, binom, M):
    """For every cop placement (absolute multiset rank) return the lowest
    robber vertex that escapes, or -1 when every robber placement loses."""
    V = 2 * n
    R = 2 if sym else V
    out = np.empty(M, dtype=np.int64)
    for m in prange(M):
        cops = np.empty(c, dtype=np.int64)
        rel = np.empty(c, dtype=np.int64)
        tmp = np.empty(c, dtype=np.int64)
        unrank_into(m, c, binom, cops)
        out[m] = -1
        for r in range(V):
            if contains(cops, c, r):
                continue
            if sym:
                slot = relocate(r, r, cops, c, n, sym, binom, rel, tmp)
            else:
                slot = m * R + r
            if win[slot * 2] == 0:
                out[m] = r
                break
    return out


@njit(parallel=True, cache=True)
def full_to_reduced(n, c, binom, M):
    """Map every unreduced (m, r) slot to its dihedral-reduced slot."""
    V = 2 * n
    out = np.empty(M * V, dtype=np.int64)
    for m in prange(M):
        cops = np.empty(c, dtype=np.int64)
        rel = np.empty(c, dtype=np.int64)
        tmp = np.empty(c, dtype=np.int64)
        unrank_into(m, c, binom, cops)
        for r in range(V):
            out[m * V + r] = relocate(r, r, cops, c, n, True, binom, rel, tmp)
    return out

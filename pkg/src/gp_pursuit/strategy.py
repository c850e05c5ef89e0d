"""The three-cop evasion strategy for the n = 7k/i family.

Scalar functions (:func:`classify`, :func:`safe_move`, ...) follow the case
definitions directly through :func:`branches_of` and graph distances.  The
``*_batch`` functions answer the same questions for whole arrays of states
from precomputed per-robber bit masks; the verifiers run on those.
"""

from __future__ import annotations

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ParamError, StrategyError, TrappedError, TurnError
from .game import Branch, GameState, Turn, branches_of, is_capture, is_trapped
from .graph import GPGraph, require_family
from .ranking import all_multisets, multiset_count, unrank_many


class Case(enum.IntEnum):
    TRAPPED = 0
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3


@dataclass(frozen=True)
class CaseLabel:
    kind: Case
    witness: Branch | None = None  # the cop-free branch, for CASE1 only


def _branch_pairs(g: GPGraph, r: int) -> list[tuple[Branch, Branch]]:
    return [branches_of(g, r, int(v)) for v in g.adj[r]]


def classify(g: GPGraph, s: GameState) -> CaseLabel:
    """Trapped, then Case 2, then Case 1, then Case 3."""
    require_family(g)
    if s.to_move is not Turn.ROBBER:
        raise TurnError("classify needs a robber-to-move state")
    if is_capture(s):
        raise ParamError("robber already captured")
    if is_trapped(g, s):
        return CaseLabel(Case.TRAPPED)
    r = s.robber
    if all(g.distance(r, c) >= 3 for c in s.cops):
        return CaseLabel(Case.CASE2)
    cops = set(s.cops)
    candidates = []
    for pair in _branch_pairs(g, r):
        for free, other in (pair, pair[::-1]):
            close = {x for x in other.members if g.distance(r, x) <= 2}
            if not cops & set(free.members) and not cops & close:
                candidates.append(free)
    if candidates:
        return CaseLabel(Case.CASE1, min(candidates, key=lambda br: (br.anchor, br.gate)))
    return CaseLabel(Case.CASE3)


def case3_profile(g: GPGraph, s: GameState) -> int | None:
    """Evaluate the Case 3 condition on its own, ignoring precedence.

    Returns ``None`` when the condition fails, otherwise the number of
    robber neighbours (1, 2 or 3) that meet it through a cop at distance at
    most 2 from the robber.
    """
    r = s.robber
    cops = set(s.cops)
    near_count = 0
    for pair in _branch_pairs(g, r):
        near = any(c in br.members and g.distance(r, c) <= 2 for br in pair for c in cops)
        both = all(cops & set(br.members) for br in pair)
        if not (near or both):
            return None
        near_count += near
    return near_count or None


def safe_move(g: GPGraph, s: GameState) -> int:
    label = classify(g, s)
    if label.kind is Case.TRAPPED:
        raise TrappedError(s.to_text(g.n))
    if label.kind is Case.CASE1:
        return label.witness.anchor
    if label.kind is Case.CASE2:
        return int(g.adj[s.robber][0])
    raise StrategyError(f"untrapped state in Case 3: {s.to_text(g.n)}")


def initial_trapped_set(g: GPGraph, cops) -> set[int]:
    """Vertices where a freshly placed robber is trapped or captured.

    The robber is placed after the cops, so the cops move next.
    """
    dist = g.distance_matrix()
    cops = np.asarray(tuple(cops), dtype=np.int64)
    covered = (dist[:, cops] <= 1).any(axis=1)
    trapped = covered[g.adj].all(axis=1) | (dist[:, cops].min(axis=1) <= 1)
    return set(np.flatnonzero(trapped).tolist())


def initial_placement(g: GPGraph, cops) -> int:
    """Lowest vertex outside the trapped set from which no cop reply
    captures or traps the robber."""
    require_family(g)
    cops = tuple(sorted(int(c) for c in cops))
    bad = initial_trapped_set(g, cops)
    cand = np.array([w for w in range(g.order) if w not in bad], dtype=np.int64)
    cap, trap = reply_outcomes(tables(g), cand, np.tile(cops, (len(cand), 1)))
    ok = np.flatnonzero(~(cap | trap))
    return int(cand[ok[0]] if len(ok) else cand[0])


# ---------------------------------------------------------------------------
# table-driven batch machinery


@dataclass(frozen=True, eq=False)
class Tables:
    """Per-robber lookup tables, all indexed ``[robber, vertex]``.

    cover   bit i set when the vertex is on or next to the robber's i-th neighbour
    member  bit j set when the vertex lies on branch slot j
    near    bit j set when it lies on slot j at distance <= 2 from the robber
    Slots are ordered by (anchor id, gate id); slots 2a and 2a+1 share an anchor.
    """

    graph: GPGraph
    dist: np.ndarray
    cover: np.ndarray
    member: np.ndarray
    near: np.ndarray
    slot_anchor: np.ndarray
    slot_gate: np.ndarray


@lru_cache(maxsize=16)
def _tables_for(n: int, k: int) -> Tables:
    from .graph import make_graph

    return _build_tables(make_graph(n, k))


def tables(g: GPGraph) -> Tables:
    return _tables_for(g.n, g.k)


def _build_tables(g: GPGraph) -> Tables:
    require_family(g)
    V = g.order
    dist = g.distance_matrix()
    cover = np.zeros((V, V), dtype=np.uint8)
    member = np.zeros((V, V), dtype=np.uint8)
    near = np.zeros((V, V), dtype=np.uint8)
    slot_anchor = np.zeros((V, 6), dtype=np.int64)
    slot_gate = np.zeros((V, 6), dtype=np.int64)
    for r in range(V):
        for i, v in enumerate(g.adj[r]):
            cover[r, dist[v] <= 1] |= np.uint8(1 << i)
        slots = sorted(
            (br for pair in _branch_pairs(g, r) for br in pair),
            key=lambda br: (br.anchor, br.gate),
        )
        for j, br in enumerate(slots):
            slot_anchor[r, j] = br.anchor
            slot_gate[r, j] = br.gate
            for x in br.members:
                member[r, x] |= np.uint8(1 << j)
                if dist[r, x] <= 2:
                    near[r, x] |= np.uint8(1 << j)
    return Tables(g, dist, cover, member, near, slot_anchor, slot_gate)


def _or_over_cops(table: np.ndarray, robbers: np.ndarray, cops: np.ndarray) -> np.ndarray:
    acc = np.zeros(len(robbers), dtype=np.uint8)
    for j in range(cops.shape[1]):
        acc |= table[robbers, cops[:, j]]
    return acc


def classify_batch(t: Tables, robbers: np.ndarray, cops: np.ndarray):
    """Return (kind, slot) arrays; ``slot`` is the witness slot for Case 1, else -1."""
    robbers = np.asarray(robbers, dtype=np.int64)
    cops = np.asarray(cops, dtype=np.int64)
    trapped = _or_over_cops(t.cover, robbers, cops) == 7
    case2 = t.dist[robbers[:, None], cops].min(axis=1) >= 3
    mem = _or_over_cops(t.member, robbers, cops)
    near = _or_over_cops(t.near, robbers, cops)
    slot = np.full(len(robbers), -1, dtype=np.int64)
    for j in range(5, -1, -1):
        ok = ((mem >> j) & 1 == 0) & ((near >> (j ^ 1)) & 1 == 0)
        slot[ok] = j
    kind = np.where(
        trapped,
        Case.TRAPPED,
        np.where(case2, Case.CASE2, np.where(slot >= 0, Case.CASE1, Case.CASE3)),
    ).astype(np.int8)
    slot[kind != Case.CASE1] = -1
    return kind, slot


def case3_batch(t: Tables, robbers: np.ndarray, cops: np.ndarray) -> np.ndarray:
    """Batch :func:`case3_profile`; 0 where the Case 3 condition fails."""
    mem = _or_over_cops(t.member, robbers, cops)
    near = _or_over_cops(t.near, robbers, cops)
    holds = np.ones(len(robbers), dtype=bool)
    count = np.zeros(len(robbers), dtype=np.int64)
    for a in range(3):
        anchor_near = (near >> (2 * a)) & 3 != 0
        both = (mem >> (2 * a)) & 3 == 3
        holds &= anchor_near | both
        count += anchor_near
    return np.where(holds, count, 0)


def safe_move_batch(t: Tables, robbers: np.ndarray, kind: np.ndarray, slot: np.ndarray) -> np.ndarray:
    """Strategy move per state; -1 for trapped or Case 3 states."""
    robbers = np.asarray(robbers, dtype=np.int64)
    g = t.graph
    out = np.full(len(robbers), -1, dtype=np.int64)
    c1 = kind == Case.CASE1
    out[c1] = t.slot_anchor[robbers[c1], slot[c1]]
    c2 = kind == Case.CASE2
    out[c2] = g.adj[robbers[c2], 0]
    return out


def reply_outcomes(t: Tables, target: np.ndarray, cops: np.ndarray):
    """Over every cop reply to a robber standing on ``target``: does some
    reply capture, and does some reply trap the robber on its next turn?"""
    g = t.graph
    target = np.asarray(target, dtype=np.int64)
    cops = np.asarray(cops, dtype=np.int64)
    capture = t.dist[target[:, None], cops].min(axis=1) <= 1
    acc = np.zeros((len(target), 1), dtype=np.uint8)
    for j in range(cops.shape[1]):
        opts = g.closed[cops[:, j]]
        masks = t.cover[target[:, None], opts]
        acc = (acc[:, :, None] | masks[:, None, :]).reshape(len(target), -1)
    trap = (acc == 7).any(axis=1)
    return capture, trap


def reply_can_trap(t: Tables, w: int, cops) -> bool:
    cap, trap = reply_outcomes(t, np.array([w]), np.array([cops]))
    return bool(cap[0] or trap[0])


# ---------------------------------------------------------------------------
# verification drivers


@dataclass
class CaseCheckReport:
    graph: tuple[int, int]
    scope: str
    states_checked: int = 0
    case_counts: dict = field(default_factory=lambda: {"case1": 0, "case2": 0, "case3": 0, "trapped": 0})
    case3_condition: int = 0
    subcase_counts: dict = field(default_factory=lambda: {"A": 0, "B": 0, "C": 0})
    violation_count: int = 0
    violations: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class SafeMoveReport:
    graph: tuple[int, int]
    scope: str
    states_checked: int = 0
    untrapped: int = 0
    move_counts: dict = field(default_factory=lambda: {"case1": 0, "case2": 0})
    violation_count: int = 0
    violations: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


MAX_LISTED = 50
_NAMES = {Case.TRAPPED: "trapped", Case.CASE1: "case1", Case.CASE2: "case2", Case.CASE3: "case3"}


def _state_batches(g: GPGraph, c: int, scope: str | int, seed: int):
    """Yield (robbers, cops) blocks of robber-to-move, non-capture states.

    ``scope`` is ``"exhaustive"`` or a sample size.  Exhaustive blocks come
    one per robber vertex, in vertex order.
    """
    V = g.order
    if scope == "exhaustive":
        allm = all_multisets(V, c)
        for r in range(V):
            cops = allm[~(allm == r).any(axis=1)]
            yield np.full(len(cops), r, dtype=np.int64), cops
        return
    count = int(scope)
    rng = np.random.default_rng(seed)
    M = multiset_count(V, c)
    block = 1 << 16
    done = 0
    while done < count:
        want = min(block, count - done)
        robbers = rng.integers(0, V, size=want)
        cops = unrank_many(rng.integers(0, M, size=want), V, c)
        keep = ~(cops == robbers[:, None]).any(axis=1)
        robbers, cops = robbers[keep], cops[keep]
        done += len(robbers)
        yield robbers, cops


def _fmt(g, r, cops) -> str:
    return GameState(tuple(int(x) for x in cops), int(r)).to_text(g.n)


def _run_blocks(fn, blocks, workers: int):
    if workers <= 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, blocks))


def _normalise_scope(scope) -> str | int:
    if isinstance(scope, str) and scope != "exhaustive":
        return int(scope)
    return scope


def verify_lemma1(g: GPGraph, scope="exhaustive", seed: int = 0, workers: int = 1) -> CaseCheckReport:
    """Every state meeting the Case 3 condition must be trapped."""
    require_family(g)
    scope = _normalise_scope(scope)
    t = tables(g)

    def run(block):
        robbers, cops = block
        kind, _ = classify_batch(t, robbers, cops)
        prof = case3_batch(t, robbers, cops)
        trapped = kind == Case.TRAPPED
        bad = np.flatnonzero(((prof > 0) & ~trapped) | (kind == Case.CASE3))
        return (
            len(robbers),
            np.bincount(kind, minlength=4),
            np.bincount(prof, minlength=4),
            [_fmt(g, robbers[i], cops[i]) for i in bad[:MAX_LISTED]],
            len(bad),
        )

    rep = CaseCheckReport((g.n, g.k), str(scope))
    for n_states, kinds, prof, listed, nbad in _run_blocks(run, _state_batches(g, 3, scope, seed), workers):
        rep.states_checked += n_states
        for case in Case:
            rep.case_counts[_NAMES[case]] += int(kinds[case])
        for label, idx in (("A", 1), ("B", 2), ("C", 3)):
            rep.subcase_counts[label] += int(prof[idx])
        rep.case3_condition += int(prof[1:].sum())
        rep.violation_count += nbad
        rep.violations.extend(listed[: MAX_LISTED - len(rep.violations)])
    return rep


def verify_lemma2(g: GPGraph, scope="exhaustive", seed: int = 0, workers: int = 1) -> SafeMoveReport:
    """From every untrapped robber-to-move state the strategy move is legal,
    cannot be captured on the reply, and no reply traps the robber."""
    require_family(g)
    scope = _normalise_scope(scope)
    t = tables(g)

    def run(block):
        robbers, cops = block
        kind, slot = classify_batch(t, robbers, cops)
        live = kind != Case.TRAPPED
        robbers, cops, kind, slot = robbers[live], cops[live], kind[live], slot[live]
        moves = safe_move_batch(t, robbers, kind, slot)
        legal = (g.adj[robbers] == moves[:, None]).any(axis=1)
        cap, trap = reply_outcomes(t, np.where(legal, moves, robbers), cops)
        bad = np.flatnonzero(~legal | cap | trap)
        return (
            int(live.size),
            len(robbers),
            int((kind == Case.CASE1).sum()),
            int((kind == Case.CASE2).sum()),
            [_fmt(g, robbers[i], cops[i]) for i in bad[:MAX_LISTED]],
            len(bad),
        )

    rep = SafeMoveReport((g.n, g.k), str(scope))
    for total, live, c1, c2, listed, nbad in _run_blocks(run, _state_batches(g, 3, scope, seed), workers):
        rep.states_checked += total
        rep.untrapped += live
        rep.move_counts["case1"] += c1
        rep.move_counts["case2"] += c2
        rep.violation_count += nbad
        rep.violations.extend(listed[: MAX_LISTED - len(rep.violations)])
    return rep


def ideal_configurations(g: GPGraph, w: int) -> list[tuple[int, ...]]:
    """Cop triples at distance 2 from ``w``, one next to each neighbour of ``w``."""
    options = [[int(x) for x in g.adj[v] if x != w] for v in g.adj[w]]
    return [tuple(sorted(combo)) for combo in np.array(np.meshgrid(*options)).T.reshape(-1, 3).tolist()]


@dataclass
class CountsReport:
    graph: tuple[int, int]
    adjacent_sizes: list
    ideal_sizes: list
    placements_checked: int = 0
    placement_failures: int = 0

    def summary(self) -> dict:
        return {
            "adjacent_min": min(self.adjacent_sizes),
            "adjacent_max": max(self.adjacent_sizes),
            "ideal_min": min(self.ideal_sizes),
            "ideal_max": max(self.ideal_sizes),
            "ideal_configurations": len(self.ideal_sizes),
            "placements_checked": self.placements_checked,
            "placement_failures": self.placement_failures,
        }


def trapped_set_counts(g: GPGraph, check_placements: bool = True) -> CountsReport:
    """Trapped-set sizes for the adjacent and distance-2 cop set-ups around
    every vertex, plus an audit of :func:`initial_placement` over every
    three-cop placement."""
    require_family(g)
    adjacent, ideal = [], []
    for w in range(g.order):
        adjacent.append(len(initial_trapped_set(g, tuple(int(v) for v in g.adj[w]))))
        for cfg in ideal_configurations(g, w):
            ideal.append(len(initial_trapped_set(g, cfg)))
    rep = CountsReport((g.n, g.k), adjacent, ideal)
    if check_placements:
        for cops in all_multisets(g.order, 3):
            cops = tuple(int(x) for x in cops)
            w = initial_placement(g, cops)
            rep.placements_checked += 1
            if w in cops or is_trapped(g, GameState(cops, w, Turn.COPS)):
                rep.placement_failures += 1
    return rep

import numpy as np
import pytest

from gp_pursuit.errors import FamilyError, TrappedError, TurnError
from gp_pursuit.game import GameState, Turn, cop_moves, is_capture, is_trapped
from gp_pursuit.graph import a, b, make_graph
from gp_pursuit.ranking import all_multisets
from gp_pursuit.strategy import (
    Case,
    case3_batch,
    case3_profile,
    classify,
    classify_batch,
    ideal_configurations,
    initial_placement,
    initial_trapped_set,
    safe_move,
    safe_move_batch,
    tables,
    trapped_set_counts,
    verify_lemma1,
    verify_lemma2,
)

N = 28


def A(i):
    return a(i, N)


def B(i):
    return b(i, N)


def _random_states(g, count, seed, near=True):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        cops = tuple(int(x) for x in rng.integers(0, g.order, 3))
        r = int(rng.integers(0, g.order))
        if r in cops or (near and min(g.distance(r, c) for c in cops) > 4):
            continue
        out.append(GameState(cops, r, Turn.ROBBER))
    return out


def test_classify_examples(g28):
    assert classify(g28, GameState((A(14), A(15), B(14)), A(0))).kind is Case.CASE2
    nbrs = tuple(int(v) for v in g28.adj[A(0)])
    assert classify(g28, GameState(nbrs, A(0))).kind is Case.TRAPPED
    label = classify(g28, GameState((B(0), A(14), B(14)), A(0)))
    assert label.kind is Case.CASE1 and label.witness.anchor in (A(1), A(27))
    # lowest anchor id wins, then the lower gate
    assert (label.witness.anchor, label.witness.gate) == (A(1), A(2))


def test_classify_errors(g28):
    with pytest.raises(TurnError):
        classify(g28, GameState((A(5),) * 3, A(0), Turn.COPS))
    with pytest.raises(FamilyError):
        classify(make_graph(14, 4), GameState((0, 1, 2), 5))


def test_safe_move_examples(g28):
    assert safe_move(g28, GameState((A(14), A(15), B(14)), A(0))) == A(1)
    # cop next to a_1's side leaves the a_27 branch as the only witness
    s = GameState((A(2), A(14), B(14)), A(0))
    assert classify(g28, s).witness.anchor == A(27)
    assert safe_move(g28, s) == A(27)
    with pytest.raises(TrappedError):
        safe_move(g28, GameState(tuple(int(v) for v in g28.adj[A(0)]), A(0)))


@pytest.mark.parametrize("n,k", [(28, 8), (42, 6), (35, 10)])
def test_scalar_and_batch_agree(n, k):
    g = make_graph(n, k)
    t = tables(g)
    states = _random_states(g, 1500, seed=n + k)
    robbers = np.array([s.robber for s in states])
    cops = np.array([s.cops for s in states])
    kind, slot = classify_batch(t, robbers, cops)
    moves = safe_move_batch(t, robbers, kind, slot)
    prof = case3_batch(t, robbers, cops)
    for i, s in enumerate(states):
        label = classify(g, s)
        assert label.kind == kind[i]
        assert (case3_profile(g, s) or 0) == prof[i]
        if label.kind is Case.CASE1:
            assert label.witness.anchor == t.slot_anchor[s.robber, slot[i]]
            assert label.witness.gate == t.slot_gate[s.robber, slot[i]]
        if label.kind in (Case.CASE1, Case.CASE2):
            assert safe_move(g, s) == moves[i]


def test_safe_move_direct(g28):
    """Strategy move checked move by move with the plain game rules."""
    for s in _random_states(g28, 300, seed=3):
        if is_trapped(g28, s):
            continue
        m = safe_move(g28, s)
        assert m in g28.adj[s.robber]
        assert all(g28.distance(c, m) >= 2 for c in s.cops)
        for reply in cop_moves(g28, GameState(s.cops, m, Turn.COPS)):
            after = GameState(reply, m, Turn.ROBBER)
            assert not is_capture(after) and not is_trapped(g28, after)


def test_every_trapped_state_is_a_fast_cop_win(g28, table28):
    """Trapped with the robber to move: the cops capture within 4 plies."""
    allm = all_multisets(g28.order, 3)
    t = tables(g28)
    count = 0
    for r in range(g28.order):
        cops = allm[~(allm == r).any(axis=1)]
        kind, _ = classify_batch(t, np.full(len(cops), r), cops)
        for row in cops[kind == Case.TRAPPED]:
            s = GameState(tuple(int(x) for x in row), r, Turn.ROBBER)
            assert table28.copwin(s)
            assert table28.capture_distance(s) <= 4
            count += 1
    assert count == 27 * g28.order


def test_verify_reports_are_worker_independent():
    g = make_graph(42, 6)
    r1 = verify_lemma1(g, 200_000, seed=5, workers=1)
    r4 = verify_lemma1(g, 200_000, seed=5, workers=4)
    assert r1 == r4 and r1.violation_count == 0
    q1 = verify_lemma2(g, 200_000, seed=5, workers=1)
    q4 = verify_lemma2(g, 200_000, seed=5, workers=4)
    assert q1 == q4 and q1.violation_count == 0


def test_case3_check_sampled_family_graphs():
    for n, k in [(42, 6), (42, 12), (42, 18), (35, 15)]:
        rep = verify_lemma1(make_graph(n, k), 1_000_000, seed=1)
        assert rep.states_checked >= 1_000_000
        assert rep.violation_count == 0 and rep.case_counts["case3"] == 0


def test_verify_requires_family():
    with pytest.raises(FamilyError):
        verify_lemma1(make_graph(14, 4), 10)


def test_trapped_set_examples(g28):
    w = A(0)
    assert len(initial_trapped_set(g28, tuple(int(v) for v in g28.adj[w]))) == 10
    cfgs = ideal_configurations(g28, w)
    assert len(cfgs) == 8
    for cfg in cfgs:
        assert all(g28.distance(w, c) == 2 for c in cfg)
        assert len(initial_trapped_set(g28, cfg)) == 13
    far = initial_trapped_set(g28, (A(14), A(14), A(14)))
    assert far == {A(14), A(13), A(15), B(14)}


def test_trapped_set_matches_definition(g28):
    for s in _random_states(g28, 60, seed=9, near=False):
        expected = {
            w for w in range(g28.order)
            if w in s.cops or is_trapped(g28, GameState(s.cops, w, Turn.COPS))
        }
        assert initial_trapped_set(g28, s.cops) == expected


def test_initial_placement_rule(g28):
    """Lowest vertex that survives every first cop reply untrapped."""
    rng = np.random.default_rng(11)
    for _ in range(60):
        cops = tuple(sorted(int(x) for x in rng.integers(0, g28.order, 3)))
        w = initial_placement(g28, cops)
        assert w not in initial_trapped_set(g28, cops)

        def safe(v):
            if v in cops or is_trapped(g28, GameState(cops, v, Turn.COPS)):
                return False
            return all(
                v not in rep and not is_trapped(g28, GameState(rep, v, Turn.ROBBER))
                for rep in cop_moves(g28, GameState(cops, v, Turn.COPS))
            )

        assert w == min(v for v in range(g28.order) if safe(v))
    w = initial_placement(g28, (A(0), A(1), A(2)))
    assert not is_trapped(g28, GameState((A(0), A(1), A(2)), w, Turn.COPS))


def test_trapped_set_counts_without_placements():
    rep = trapped_set_counts(make_graph(42, 12), check_placements=False)
    assert set(rep.adjacent_sizes) == {10} and set(rep.ideal_sizes) == {13}

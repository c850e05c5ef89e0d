import pytest

from gp_pursuit.graph import make_graph
from gp_pursuit.simulate import play_vs_solver, simulate_batch


@pytest.mark.parametrize("policy", ["random", "greedy"])
def test_strategy_robber_survives(policy):
    rep = simulate_batch(make_graph(42, 6), games=500, plies=168, policy=policy, seed=1)
    assert rep.clean, rep


def test_batches_are_reproducible(g28):
    a = simulate_batch(g28, 200, 40, "greedy", seed=3)
    b = simulate_batch(g28, 200, 40, "greedy", seed=3)
    assert (a.captures, a.trapped) == (b.captures, b.trapped) == (0, 0)


def test_unknown_policy(g28):
    with pytest.raises(ValueError):
        simulate_batch(g28, 1, 1, "lazy")


def test_against_solver_from_adjacent_start(g28, table28):
    cops = tuple(int(v) for v in g28.adj[0])
    rep = play_vs_solver(g28, table28, 112, start_cops=cops)
    assert rep.clean and len(rep.history) == 113
    assert rep.history[0].robber not in cops

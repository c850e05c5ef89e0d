import itertools
from math import comb

import numpy as np
import pytest

from gp_pursuit.ranking import (
    all_multisets,
    binomial_table,
    multiset_count,
    rank,
    rank_many,
    unrank,
    unrank_many,
)


@pytest.mark.parametrize("v,c", [(10, 1), (10, 3), (56, 3), (7, 4), (1, 2)])
def test_colex_order_matches_enumeration(v, c):
    expected = sorted(itertools.combinations_with_replacement(range(v), c), key=lambda t: t[::-1])
    assert multiset_count(v, c) == len(expected) == comb(v + c - 1, c)
    table = all_multisets(v, c)
    assert [tuple(row) for row in table.tolist()] == expected
    assert [rank(x) for x in expected] == list(range(len(expected)))
    assert np.array_equal(rank_many(table), np.arange(len(expected)))


def test_unrank_scalar_and_vector_agree():
    v, c = 56, 4
    ranks = np.random.default_rng(0).integers(0, multiset_count(v, c), 2000)
    vec = unrank_many(ranks, v, c)
    for r, row in zip(ranks, vec):
        assert unrank(int(r), v, c) == tuple(row)
        assert rank(row) == r


def test_unrank_out_of_range():
    with pytest.raises(ValueError):
        unrank(multiset_count(10, 3), 10, 3)


def test_rank_is_order_insensitive():
    assert rank((5, 1, 3)) == rank((1, 3, 5))


def test_binomial_table():
    tab = binomial_table(8, 3)
    assert tab.shape == (11, 4)
    assert all(tab[y, j] == comb(y, j) for y in range(11) for j in range(4))

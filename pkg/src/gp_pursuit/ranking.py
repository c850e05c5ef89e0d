"""Dense ranking of sorted multisets (combinatorial number system).

A sorted multiset x_0 <= ... <= x_{c-1} over [0, V) maps to the strictly
increasing combination y_i = x_i + i over [0, V + c - 1), ranked in colex
order: rank = sum_i C(y_i, i + 1).
"""

from __future__ import annotations

from math import comb

import numpy as np


def multiset_count(v: int, c: int) -> int:
    return comb(v + c - 1, c)


def binomial_table(v: int, c: int) -> np.ndarray:
    """``tab[y, j] = C(y, j)`` for y < v + c, j <= c."""
    tab = np.zeros((v + c, c + 1), dtype=np.int64)
    for y in range(v + c):
        for j in range(c + 1):
            tab[y, j] = comb(y, j)
    return tab


def rank(cops) -> int:
    return sum(comb(x + i, i + 1) for i, x in enumerate(sorted(cops)))


def unrank(r: int, v: int, c: int) -> tuple[int, ...]:
    out = [0] * c
    rem = r
    for i in range(c - 1, -1, -1):
        y = i
        while comb(y + 1, i + 1) <= rem:
            y += 1
        rem -= comb(y, i + 1)
        out[i] = y - i
    if rem != 0 or out[-1] >= v:
        raise ValueError(f"rank {r} out of range for V={v}, c={c}")
    return tuple(out)


def unrank_many(ranks: np.ndarray, v: int, c: int) -> np.ndarray:
    """Vectorised :func:`unrank`; returns an (N, c) int64 array."""
    tab = binomial_table(v, c)
    rem = np.asarray(ranks, dtype=np.int64).copy()
    out = np.empty((len(rem), c), dtype=np.int64)
    for i in range(c - 1, -1, -1):
        col = tab[:, i + 1]
        y = np.searchsorted(col, rem, side="right") - 1
        rem -= col[y]
        out[:, i] = y - i
    return out


def rank_many(cops: np.ndarray) -> np.ndarray:
    cops = np.sort(np.asarray(cops, dtype=np.int64), axis=1)
    c = cops.shape[1]
    v = int(cops.max()) + 1 if cops.size else 1
    tab = binomial_table(v, c)
    total = np.zeros(len(cops), dtype=np.int64)
    for i in range(c):
        total += tab[cops[:, i] + i, i + 1]
    return total


def all_multisets(v: int, c: int) -> np.ndarray:
    """Every sorted multiset, row index equal to its rank."""
    return unrank_many(np.arange(multiset_count(v, c)), v, c)

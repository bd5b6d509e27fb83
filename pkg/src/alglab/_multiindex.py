"""Lexicographic k-subset indexing shared by cochains and multivectors."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    if k < 0:
        return ()
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def subset_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {s: i for i, s in enumerate(subsets(n, k))}


def sort_with_sign(seq) -> tuple[int, tuple[int, ...]]:
    """Sort ``seq`` and return (sign of the sorting permutation, sorted tuple).

    Sign is 0 when ``seq`` has a repeated entry (the wedge vanishes).
    """
    items = list(seq)
    if len(set(items)) != len(items):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(items)

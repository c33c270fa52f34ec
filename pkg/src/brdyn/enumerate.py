"""Exhaustive generators for small structures and preference relations.

Labelings are restricted growth strings: the first cell gets label 0 and each
later cell reuses a label or opens the next fresh one, so every outcome
renaming class appears exactly once.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Sequence

from .relations import Preference, is_acyclic


def rgs(length: int, max_labels: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of the given length using at most ``max_labels`` labels."""
    if length == 0:
        yield ()
        return
    word = [0] * length

    def rec(i: int, top: int):
        if i == length:
            yield tuple(word)
            return
        for lab in range(min(top + 2, max_labels)):
            word[i] = lab
            yield from rec(i + 1, max(top, lab))

    yield from rec(1, 0)


def normalise(labels: Sequence[int]) -> tuple[int, ...]:
    """Rename labels in order of first appearance."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


@lru_cache(maxsize=None)
def _cell_permutations(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Cell index maps for all row/column permutations (and transposition when square)."""
    maps = []
    for rp in permutations(range(n)):
        for cp in permutations(range(m)):
            maps.append(tuple(rp[i] * m + cp[j] for i in range(n) for j in range(m)))
            if n == m:
                maps.append(tuple(rp[j] * m + cp[i] for i in range(n) for j in range(m)))
    return tuple(maps)


def canonical(labels: Sequence[int], n: int, m: int) -> tuple[int, ...]:
    """Least normalised labeling in the orbit under row/column permutation, transposition
    (square shapes only) and outcome renaming."""
    return min(normalise([labels[k] for k in cmap]) for cmap in _cell_permutations(n, m))


def structure_orbits(n: int, m: int, max_labels: int) -> list[tuple[tuple[int, ...], int]]:
    """Canonical labelings of n x m structures with their orbit sizes within the RGS family."""
    counts: dict[tuple[int, ...], int] = {}
    for word in rgs(n * m, max_labels):
        c = canonical(word, n, m)
        counts[c] = counts.get(c, 0) + 1
    return sorted(counts.items())


def weak_order_ranks(k: int) -> list[tuple[int, ...]]:
    """Rank vectors of all strict weak orders on ``k`` outcomes (ordered set partitions)."""
    out = []
    for ranks in product(range(k), repeat=k):
        used = set(ranks)
        if used == set(range(len(used))):
            out.append(ranks)
    return out


def weak_orders(k: int) -> list[Preference]:
    return [Preference.from_ranks(r) for r in weak_order_ranks(k)]


def linear_orders(k: int) -> list[Preference]:
    return [Preference.from_order(p, k) for p in permutations(range(k))]


def acyclic_relations(k: int) -> list[Preference]:
    """Every acyclic irreflexive relation on ``k`` labeled outcomes."""
    pairs = [(x, y) for x in range(k) for y in range(k) if x != y]
    out = []
    for bits in range(1 << len(pairs)):
        chosen = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        p = Preference(k, chosen)
        if is_acyclic(p):
            out.append(p)
    return out


def rectangle_free_matrices(n: int, m: int, max_labels: int) -> Iterator[tuple[int, ...]]:
    """RGS labelings of n x m matrices with no forbidden rectangle, by pruned backtracking.

    A rectangle is checked as soon as its bottom-right cell is filled.
    """
    cells = [0] * (n * m)

    def clash(i: int, j: int) -> bool:
        v = cells[i * m + j]
        for i0 in range(i):
            up = cells[i0 * m + j]
            if up == v:
                continue
            for j0 in range(j):
                left = cells[i * m + j0]
                corner = cells[i0 * m + j0]
                if left != v and corner != left and corner != up:
                    return True
        return False

    def rec(k: int, top: int):
        if k == n * m:
            yield tuple(cells)
            return
        i, j = divmod(k, m)
        for lab in range(min(top + 2, max_labels)):
            cells[k] = lab
            if not clash(i, j):
                yield from rec(k + 1, max(top, lab))

    if n * m == 0:
        yield ()
        return
    cells[0] = 0
    yield from rec(1, 0)

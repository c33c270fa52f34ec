import random
from fractions import Fraction
from itertools import product
from math import comb, prod

import pytest

from brdyn import fixtures
from brdyn.core import (
    Game,
    GameStructure,
    permute,
    permute_profile,
    rectangles,
    restrict,
    slice_game,
    subgame,
    transpose_game,
)
from brdyn.dynamics import has_fip, nash_equilibria
from brdyn.errors import EmptySubset, GameError, NotAPermutation, OutOfRange, TooFewPlayers
from brdyn.patterns import find_forbidden_rectangles
from brdyn.relations import Preference

import oracles


def _labels(s):
    return [[s.outcomes[o] for o in row] for row in s.matrix()]


def _random_structure(rng, n, m, k):
    return GameStructure.from_ids((n, m), [rng.randrange(k) for _ in range(n * m)], k)


def test_tensor_layout_player_zero_slowest():
    s = GameStructure.from_labels((2, 3, 2), [f"c{i}" for i in range(12)])
    assert s.index((1, 2, 0)) == 1 * 6 + 2 * 2 + 0
    assert all(s.profile(s.index(p)) == p for p in s.profiles())


def test_mixed_outcome_kinds_rejected():
    with pytest.raises(GameError):
        GameStructure((1, 2), (0, 1), ("x", (Fraction(1), Fraction(2))))


def test_subgame_identity():
    g = fixtures.load("WA10")
    assert subgame(g, [range(c) for c in g.strategy_counts]) == g


def test_subgame_puc1_pattern():
    g = fixtures.load("PUC1")
    sub = subgame(g, [[0, 2], [1, 2]])
    labels = [[tuple(int(v) for v in c) for c in row] for row in _labels(sub.structure)]
    assert labels == [[(0, 3), (2, 2)], [(1, 1), (3, 0)]]


def test_subgame_intro3_upper_left_has_no_ne():
    g = fixtures.load("INTRO3")
    sub = subgame(g, [[0, 1], [0, 1]])
    assert nash_equilibria(sub) == oracles.nash(sub) == set()


def test_subgame_composes():
    g = fixtures.load("PUC2")
    inner = subgame(subgame(g, [[0, 2, 3], [1, 2, 3]]), [[0, 2], [1, 2]])
    assert inner == subgame(g, [[0, 3], [2, 3]])


def test_subgame_errors():
    g = fixtures.load("MP2")
    with pytest.raises(EmptySubset):
        subgame(g, [[], [0]])
    with pytest.raises(OutOfRange):
        subgame(g, [[0, 2], [0]])


def test_slices_of_tri1():
    g = fixtures.load("TRI1")
    first = slice_game(g, 2, 0)
    second = slice_game(g, 2, 1)
    assert _labels(first.structure) == [["x", "z"], ["y", "y"]]
    assert _labels(second.structure) == [["t", "z"], ["t", "y"]]
    assert first.preferences == g.preferences[:2]


def test_slice_to_one_player_ne_are_row_maxima():
    g = fixtures.load("INTRO1")
    for strategy in range(2):
        one = slice_game(g, 1, strategy)
        assert one.player_count == 1
        column = [g.structure.label((i, strategy))[0] for i in range(2)]
        best = max(column)
        assert nash_equilibria(one) == {(i,) for i in range(2) if column[i] == best}


def test_slice_errors():
    with pytest.raises(TooFewPlayers):
        slice_game(slice_game(fixtures.load("MP2"), 0, 0), 0, 0)
    with pytest.raises(OutOfRange):
        slice_game(fixtures.load("MP2"), 0, 5)


def test_slice_commutes_with_subgame_on_other_players():
    g = fixtures.load("TRI2")
    a = subgame(slice_game(g, 2, 1), [[0, 1], [0, 2]])
    b = slice_game(subgame(g, [[0, 1], [0, 2], [0, 1]]), 2, 1)
    assert a == b


@pytest.mark.parametrize(
    "counts, expected",
    [((2, 2), 1), ((3, 3), 9), ((2, 2, 2), 6), ((1, 4), 0), ((3, 2, 4), None)],
)
def test_rectangle_counts(counts, expected):
    s = GameStructure.from_labels(counts, ["x"] * prod(counts))
    rects = list(rectangles(s))
    formula = sum(
        comb(counts[p], 2) * comb(counts[q], 2) * prod(c for r, c in enumerate(counts) if r not in (p, q))
        for p in range(len(counts))
        for q in range(p + 1, len(counts))
    )
    assert len(rects) == formula
    if expected is not None:
        assert len(rects) == expected
    assert len(set(rects)) == len(rects)
    assert rects == sorted(rects, key=lambda r: (r.players, r.context, r.rows, r.cols))


def test_permute_identity_and_errors():
    s = fixtures.load("INDFS_L")
    assert permute(s, [[0, 1, 2], [0, 1, 2]]) == s
    with pytest.raises(NotAPermutation):
        permute(s, [[0, 0, 1], [0, 1, 2]])


def test_permute_preserves_forbidden_rectangles_indfs_l():
    s = fixtures.load("INDFS_L")
    swapped = permute(s, [[2, 1, 0], [0, 1, 2]])
    assert len(find_forbidden_rectangles(swapped)) == len(find_forbidden_rectangles(s))


def test_permute_random_structures():
    rng = random.Random(7)
    for _ in range(30):
        s = _random_structure(rng, 4, 4, 4)
        perms = [rng.sample(range(4), 4), rng.sample(range(4), 4)]
        t = permute(s, perms)
        assert len(oracles.forbidden_rectangles(t.matrix())) == len(oracles.forbidden_rectangles(s.matrix()))
        for prof in s.profiles():
            assert t.outcome(permute_profile(prof, perms)) == s.outcome(prof)


def test_permute_preserves_ne_and_fip():
    rng = random.Random(11)
    for _ in range(20):
        s = _random_structure(rng, 3, 3, 3)
        prefs = tuple(Preference.from_ranks([rng.randrange(3) for _ in range(3)]) for _ in range(2))
        g = Game(s, prefs)
        perms = [rng.sample(range(3), 3), rng.sample(range(3), 3)]
        h = Game(permute(s, perms), prefs)
        assert nash_equilibria(h) == {permute_profile(p, perms) for p in nash_equilibria(g)}
        assert bool(has_fip(h)) == bool(has_fip(g))


def test_transpose_swaps_players():
    g = fixtures.load("PUB1")
    t = transpose_game(g)
    assert {(j, i) for i, j in nash_equilibria(g)} == nash_equilibria(t)


def test_payoff_game_from_table():
    g = Game.from_payoff_table([[(1, 0), (0, 1)], [(0, 1), (1, 0)]])
    assert g.structure.mode == "payoff"
    assert g.structure.label((0, 0)) == (Fraction(1), Fraction(0))
    assert len(g.structure.outcomes) == 2


def test_restrict_keeps_outcome_table():
    s = fixtures.load("XYZ44").structure
    r = restrict(s, [[0, 1], [0, 1]])
    assert r.outcomes == s.outcomes
    assert all(r.outcome(p) == s.outcome(p) for p in product(range(2), range(2)))

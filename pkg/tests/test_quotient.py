import random
from fractions import Fraction
from itertools import product

import pytest

from brdyn import fixtures
from brdyn.core import Game, GameStructure
from brdyn.dynamics import nash_equilibria
from brdyn.errors import BadEps, NotPayoffMode, OutOfRange, PartitionTooCoarse, TwoPlayerOnly
from brdyn.patterns import find_forbidden_patterns
from brdyn.quotient import (
    BlockPartition,
    derived_game,
    epsilon_game,
    epsilon_nash,
    epsilon_terminates,
    variation,
    verify_partition,
)

import oracles
from generators import blocky_game, random_payoff_game

PAYOFF_FIXTURES = [
    n for n in fixtures.names()
    if isinstance(fixtures.load(n), Game) and fixtures.load(n).structure.mode == "payoff"
]


def _eps_nash_oracle(g, eps):
    st = g.structure
    out = set()
    for s in st.profiles():
        ok = True
        for p, t in oracles.unilateral(g, s):
            if st.label(s)[p] + eps < st.label(t)[p]:
                ok = False
        if ok:
            out.add(s)
    return out


def _spread(g):
    vals = [c for o in g.structure.outcomes for c in o]
    return max(vals) - min(vals)


@pytest.mark.parametrize("name", PAYOFF_FIXTURES)
def test_eps_zero_is_nash(name):
    g = fixtures.load(name)
    assert epsilon_nash(g, 0) == nash_equilibria(g) == oracles.nash(g)


@pytest.mark.parametrize("name", PAYOFF_FIXTURES)
def test_eps_at_spread_everything_is_equilibrium(name):
    g = fixtures.load(name)
    assert epsilon_nash(g, _spread(g)) == set(g.structure.profiles())
    v = epsilon_terminates(g, _spread(g) + 1)
    assert v.terminates and v.sinks == set(g.structure.profiles())


def test_mp2_half():
    g = fixtures.load("MP2")
    eps = Fraction(1, 2)
    assert epsilon_nash(g, eps) == _eps_nash_oracle(g, eps)
    v = epsilon_terminates(g, eps)
    assert v.sinks == epsilon_nash(g, eps)
    assert v.terminates == oracles.acyclic(oracles.improvement_digraph(epsilon_game(g, eps)))


def test_eps_nash_matches_double_loop_oracle():
    rng = random.Random(1)
    for _ in range(80):
        g = random_payoff_game(rng)
        for eps in (0, Fraction(1, 2), 1, Fraction(5, 2)):
            assert epsilon_nash(g, eps) == _eps_nash_oracle(g, eps)


def test_eps_preference_pairs_match_oracle():
    rng = random.Random(2)
    for _ in range(30):
        g = random_payoff_game(rng)
        eg = epsilon_game(g, 1)
        for p in range(2):
            assert eg.preferences[p].pairs == oracles.eps_pairs([o[p] for o in g.structure.outcomes], 1)


def test_monotone_in_eps():
    rng = random.Random(3)
    for _ in range(60):
        g = random_payoff_game(rng)
        a, b = sorted(Fraction(rng.randrange(8), 2) for _ in range(2))
        ga = oracles.improvement_digraph(epsilon_game(g, a))
        gb = oracles.improvement_digraph(epsilon_game(g, b))
        assert set(gb.edges) <= set(ga.edges)
        assert epsilon_nash(g, a) <= epsilon_nash(g, b)


def test_pattern_free_games_terminate():
    rng = random.Random(4)
    seen = 0
    for _ in range(300):
        g = random_payoff_game(rng, 3, 3, 3)
        if find_forbidden_patterns(g):
            continue
        seen += 1
        for eps in (Fraction(1, 3), Fraction(1, 2), 1, 2):
            v = epsilon_terminates(g, eps)
            assert v.terminates
            assert v.sinks == epsilon_nash(g, eps)
    assert seen > 20


def test_epsilon_errors():
    g = fixtures.load("MP2")
    with pytest.raises(BadEps):
        epsilon_terminates(g, 0)
    with pytest.raises(BadEps):
        epsilon_nash(g, -1)
    with pytest.raises(NotPayoffMode):
        epsilon_nash(fixtures.load("XYZ_INDIFF"), 1)


# -- partitions ------------------------------------------------------------------------


def _variation_oracle(g, part):
    st = g.structure
    worst = 0
    for bp in product(*(range(len(b)) for b in part.blocks)):
        cells = list(product(*(part.blocks[p][k] for p, k in enumerate(bp))))
        for s, t in product(cells, cells):
            worst = max(worst, max(abs(a - b) for a, b in zip(st.label(s), st.label(t))))
    return worst


def test_singleton_partition_zero_variation():
    g = fixtures.load("WA10")
    part = BlockPartition.singletons(g.strategy_counts)
    assert variation(g, part) == 0 and verify_partition(g, part, Fraction(1, 100))


def test_constant_game_whole_partition():
    g = Game.from_payoff_table([[(1, 1)] * 3] * 2)
    assert verify_partition(g, BlockPartition.whole((2, 3)), Fraction(1, 100))


def test_hand_built_4x4_variation():
    h = Fraction(1, 10)
    rows = [
        [(0, 0), (h, 0), (5, 5), (5, 5 + h)],
        [(0, h), (0, 0), (5 + 2 * h, 5), (5, 5)],
        [(3, 1), (3, 1), (1, 3), (1, 3)],
        [(3, 1 + h), (3 + h, 1), (1, 3), (1 + h, 3 + h)],
    ]
    g = Game.from_payoff_table(rows)
    part = BlockPartition((((0, 1), (2, 3)), ((0, 1), (2, 3))))
    assert variation(g, part) == _variation_oracle(g, part) == 2 * h
    assert verify_partition(g, part, 3 * h) and not verify_partition(g, part, 2 * h)


def test_variation_matches_oracle_on_random_partitions():
    rng = random.Random(5)
    for _ in range(60):
        g, part = blocky_game(rng, Fraction(1))
        assert variation(g, part) == _variation_oracle(g, part)


def test_partition_checks():
    with pytest.raises(OutOfRange):
        BlockPartition((((0,), (0, 1)), ((0,),))).check((2, 1))
    with pytest.raises(OutOfRange):
        BlockPartition((((0,),),)).check((1, 1))


# -- quotient --------------------------------------------------------------------------


def test_singleton_quotient_is_eps_game():
    g = fixtures.load("PUC1")
    eps = Fraction(1, 2)
    d = derived_game(g, BlockPartition.singletons(g.strategy_counts), eps)
    assert d.holds
    eg = epsilon_game(g, eps)
    st, qs = g.structure, d.game.structure
    for p in range(2):
        for s in st.profiles():
            for t in st.profiles():
                a = (st.outcome(s), st.outcome(t)) in eg.preferences[p].pairs
                b = (qs.outcome(s), qs.outcome(t)) in d.game.preferences[p].pairs
                assert a == b


def test_constant_game_quotient_empty_preferences():
    g = Game.from_payoff_table([[(2, 2)] * 3] * 3)
    part = BlockPartition((((0, 2), (1,)), ((0, 1, 2),)))
    d = derived_game(g, part, 1)
    assert all(not p.pairs for p in d.game.preferences) and d.holds


def test_random_pattern_free_quotients():
    rng = random.Random(6)
    checked = 0
    while checked < 60:
        eps = Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2]))
        g, part = blocky_game(rng, eps, 3, 3)
        if find_forbidden_patterns(g):
            continue
        d = derived_game(g, part, eps)
        assert d.steps_matched and d.uniform_gap and d.pattern_free_preserved is True
        checked += 1


def test_quotient_steps_on_games_with_patterns():
    rng = random.Random(7)
    for _ in range(60):
        g, part = blocky_game(rng, Fraction(1))
        d = derived_game(g, part, 1)
        assert d.steps_matched and d.uniform_gap


def test_quotient_errors():
    g = fixtures.load("MP2")
    with pytest.raises(PartitionTooCoarse):
        derived_game(g, BlockPartition.whole((2, 2)), 1)
    with pytest.raises(TwoPlayerOnly):
        tri = Game.from_payoffs((1, 1, 1), [(0, 0, 0)])
        derived_game(tri, BlockPartition.whole((1, 1, 1)), 1)
    with pytest.raises(NotPayoffMode):
        s = fixtures.load("XYZ_INDIFF")
        derived_game(s, BlockPartition.singletons(s.strategy_counts), 1)

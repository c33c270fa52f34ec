from fractions import Fraction
from itertools import product

import pytest

from brdyn.errors import BadEps, CyclicPreference, GameError, NotPayoffMode
from brdyn.relations import (
    Preference,
    epsilon_preference,
    is_acyclic,
    is_pseudo_transitive,
    is_strict_weak_order,
    is_transitive,
    linearize,
    transitive_closure,
)

import oracles


def _all_relations(k):
    cells = [(x, y) for x in range(k) for y in range(k) if x != y]
    for bits in product((0, 1), repeat=len(cells)):
        yield Preference(k, [c for c, b in zip(cells, bits) if b])


def _triple_transitive(p):
    n = p.outcome_count
    return all(
        not (p.lt(x, y) and p.lt(y, z)) or p.lt(x, z) for x, y, z in product(range(n), repeat=3)
    )


def test_empty_relation_is_acyclic():
    assert is_acyclic(Preference(3))


def test_single_pair_is_acyclic():
    assert is_acyclic(Preference(3, [(1, 0)]))


def test_three_cycle_is_not_acyclic():
    p = Preference(3, [(0, 1), (1, 2), (2, 0)])
    assert not is_acyclic(p)
    assert not oracles.relation_is_acyclic(3, p.pairs)


def test_acyclicity_matches_networkx_on_all_relations_of_three():
    for p in _all_relations(3):
        assert is_acyclic(p) == oracles.relation_is_acyclic(3, p.pairs)


def test_irreflexive_and_range_checked():
    with pytest.raises(GameError):
        Preference(2, [(1, 1)])
    with pytest.raises(GameError):
        Preference(2, [(0, 2)])


def test_linear_order_is_everything():
    p = Preference.from_order([2, 0, 3, 1])
    assert is_transitive(p) and is_pseudo_transitive(p) and is_strict_weak_order(p)
    assert p.is_linear


def test_indifferent_z_breaks_pseudo_transitivity():
    # outcomes x=0, y=1, z=2 with only y < x
    p = Preference(3, [(1, 0)])
    assert is_transitive(p)
    assert not is_pseudo_transitive(p)
    assert not is_strict_weak_order(p)


def test_two_below_one_top():
    p = Preference(3, [(0, 2), (1, 2)])
    assert is_transitive(p) and is_pseudo_transitive(p)


def test_transitivity_matches_triple_loop_on_all_relations_of_three():
    for p in _all_relations(3):
        assert is_transitive(p) == _triple_transitive(p)


def test_strict_weak_order_implies_pseudo_transitive_up_to_four():
    count = 0
    for k in range(1, 5):
        for p in _all_relations(k):
            if is_strict_weak_order(p):
                count += 1
                assert is_transitive(p) and is_pseudo_transitive(p)
    # ordered set partitions (Fubini numbers) 1 + 3 + 13 + 75
    assert count == 92


def test_payoff_preferences_are_strict_weak_orders():
    import random

    rng = random.Random(3)
    for _ in range(50):
        vals = [rng.randint(0, 3) for _ in range(5)]
        p = Preference.from_ranks(vals)
        assert is_strict_weak_order(p)
        assert p.pairs == oracles.payoff_order_pairs(vals)


def test_linearize_fixed_point():
    p = Preference.from_order([1, 0, 2])
    assert linearize(p) == p


def test_linearize_contains_closure_and_is_linear():
    for p in _all_relations(3):
        if not is_acyclic(p):
            with pytest.raises(CyclicPreference):
                linearize(p)
            continue
        lin = linearize(p)
        assert lin.is_linear
        assert transitive_closure(p).pairs <= lin.pairs


def test_linearize_breaks_ties_by_id():
    # y < x over {x, y, z}: z is free and smallest-id-first puts x... x has a predecessor
    p = Preference(3, [(1, 0)])
    assert linearize(p) == Preference.from_order([1, 0, 2])


def test_epsilon_zero_is_payoff_order():
    table = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))]
    assert epsilon_preference(table, 0, 0).pairs == {(0, 1)}


def test_epsilon_drops_close_pairs():
    table = [(Fraction(v),) for v in ("0", "1/2", "1")]
    assert epsilon_preference(table, 0, Fraction(3, 5)).pairs == {(0, 2)}
    assert epsilon_preference(table, 0, Fraction(3, 5)).pairs == oracles.eps_pairs(
        [Fraction(0), Fraction(1, 2), Fraction(1)], Fraction(3, 5)
    )


def test_epsilon_above_spread_is_empty():
    table = [(Fraction(v),) for v in (0, 2, 5)]
    assert not epsilon_preference(table, 0, 5).pairs


def test_epsilon_errors():
    with pytest.raises(BadEps):
        epsilon_preference([(Fraction(0),)], 0, -1)
    with pytest.raises(NotPayoffMode):
        epsilon_preference(["x", "y"], 0, 1)


def test_epsilon_is_a_semiorder_not_always_weak_order():
    table = [(Fraction(v),) for v in (0, 1, 2)]
    p = epsilon_preference(table, 0, Fraction(3, 2))
    assert is_transitive(p) and is_acyclic(p)
    # 0 ~ 1 and 1 ~ 2 but 0 < 2
    assert not is_strict_weak_order(p)

"""Epsilon-improvement on finite payoff games and the block quotient game.

A payoff game is re-equipped with epsilon-preferences: player ``p`` prefers
outcome ``y`` to ``x`` when ``v_p(x) + eps < v_p(y)``.  A block partition
groups each player's strategies; when payoffs vary by less than ``eps / 3``
inside every block product, the quotient game on blocks simulates the
epsilon-improvement of the original game.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .core import PAYOFF, Game, GameStructure, Profile, require_two_players
from .dynamics import graph_of, nash_equilibria
from .errors import BadEps, GameError, NotPayoffMode, OutOfRange, PartitionTooCoarse
from .graphs import find_cycle
from .relations import Preference, epsilon_preference


def _require_payoff(g: Game) -> None:
    if g.structure.mode != PAYOFF:
        raise NotPayoffMode("epsilon machinery needs payoff outcomes")


def epsilon_game(g: Game, eps) -> Game:
    """The same structure with every player's preference replaced by its eps-version."""
    _require_payoff(g)
    table = g.structure.outcomes
    return Game(g.structure, tuple(epsilon_preference(table, p, eps) for p in range(g.player_count)))


def epsilon_nash(g: Game, eps) -> frozenset[Profile]:
    return nash_equilibria(epsilon_game(g, eps))


@dataclass(frozen=True)
class EpsilonVerdict:
    terminates: bool
    sinks: frozenset[Profile]
    cycle: tuple[Profile, ...] | None = None

    def __bool__(self) -> bool:
        return self.terminates


def epsilon_terminates(g: Game, eps) -> EpsilonVerdict:
    """Acyclicity of the eps-improvement graph; its sinks must be the eps-NE."""
    eps = Fraction(eps)
    if eps <= 0:
        raise BadEps(f"eps must be positive, got {eps}")
    eg = epsilon_game(g, eps)
    graph = graph_of(eg)
    st = g.structure
    sinks = frozenset(st.profile(u) for u in graph.sinks)
    if sinks != nash_equilibria(eg):
        raise AssertionError("sinks of the eps-improvement graph differ from the eps-NE")
    cyc = find_cycle(graph.succ)
    if cyc is None:
        return EpsilonVerdict(True, sinks)
    return EpsilonVerdict(False, sinks, tuple(st.profile(u) for u in cyc))


# -- block partitions ---------------------------------------------------------------


@dataclass(frozen=True)
class BlockPartition:
    """``blocks[p]`` lists player ``p``'s blocks, each a tuple of strategy indices."""

    blocks: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "blocks", tuple(tuple(tuple(int(s) for s in b) for b in bs) for bs in self.blocks)
        )
        for p, bs in enumerate(self.blocks):
            if any(not b for b in bs):
                raise GameError(f"player {p} has an empty block")

    @classmethod
    def singletons(cls, counts: Sequence[int]) -> BlockPartition:
        return cls(tuple(tuple((s,) for s in range(c)) for c in counts))

    @classmethod
    def whole(cls, counts: Sequence[int]) -> BlockPartition:
        return cls(tuple((tuple(range(c)),) for c in counts))

    def check(self, counts: Sequence[int]) -> None:
        if len(self.blocks) != len(counts):
            raise OutOfRange("partition must list blocks for every player")
        for p, (bs, c) in enumerate(zip(self.blocks, counts)):
            flat = sorted(s for b in bs for s in b)
            if flat != list(range(c)):
                raise OutOfRange(f"blocks of player {p} do not partition 0..{c - 1}")

    def block_of(self, player: int, strategy: int) -> int:
        for k, b in enumerate(self.blocks[player]):
            if strategy in b:
                return k
        raise OutOfRange(f"strategy {strategy} of player {player} is in no block")

    def counts(self) -> tuple[int, ...]:
        return tuple(len(bs) for bs in self.blocks)

    def members(self, block_profile: Sequence[int]):
        """All profiles of the original game inside one block product."""
        return product(*(self.blocks[p][k] for p, k in enumerate(block_profile)))


def variation(g: Game, part: BlockPartition) -> Fraction:
    """Largest max-norm distance between payoff vectors inside a single block product."""
    _require_payoff(g)
    st = g.structure
    part.check(st.strategy_counts)
    worst = Fraction(0)
    for bp in product(*(range(c) for c in part.counts())):
        vecs = [st.outcomes[st.outcome(s)] for s in part.members(bp)]
        for comp in range(st.player_count):
            vals = [v[comp] for v in vecs]
            worst = max(worst, max(vals) - min(vals))
    return worst


def verify_partition(g: Game, part: BlockPartition, bound) -> bool:
    return variation(g, part) < Fraction(bound)


# -- quotient game --------------------------------------------------------------------


@dataclass(frozen=True)
class DerivedGame:
    game: Game
    partition: BlockPartition
    eps: Fraction
    steps_matched: bool
    uniform_gap: bool
    pattern_free_preserved: bool | None  # None when the original game has forbidden patterns

    @property
    def holds(self) -> bool:
        return self.steps_matched and self.uniform_gap and self.pattern_free_preserved is not False


def derived_game(g: Game, part: BlockPartition, eps) -> DerivedGame:
    """Quotient game on blocks with the existential eps-preference, plus its three checks.

    Each block profile is its own outcome.  Player ``p`` prefers block profile
    ``J'`` to ``J`` when some member of ``J'`` beats some member of ``J`` by
    more than ``eps`` for ``p``.
    """
    from .patterns import find_forbidden_patterns

    require_two_players(g)
    _require_payoff(g)
    eps = Fraction(eps)
    if eps <= 0:
        raise BadEps(f"eps must be positive, got {eps}")
    st = g.structure
    part.check(st.strategy_counts)
    if not verify_partition(g, part, eps / 3):
        raise PartitionTooCoarse("payoffs vary by eps/3 or more inside some block product")

    qcounts = part.counts()
    qprofiles = list(product(*(range(c) for c in qcounts)))
    members = [[st.outcomes[st.outcome(s)] for s in part.members(bp)] for bp in qprofiles]
    n = len(qprofiles)
    prefs = []
    for p in range(2):
        hi = [max(v[p] for v in vs) for vs in members]
        lo = [min(v[p] for v in vs) for vs in members]
        prefs.append(Preference(n, ((x, y) for x in range(n) for y in range(n) if lo[x] + eps < hi[y])))
    names = tuple("B" + "_".join(str(k) for k in bp) for bp in qprofiles)
    qs = GameStructure(qcounts, tuple(range(n)), names)
    q = Game(qs, tuple(prefs))

    # (a) every eps-step of g is a step of the quotient
    qgraph = graph_of(q)
    qedges = {(u, p, v) for u, p, v in qgraph.edges}
    block = [[part.block_of(p, s) for s in range(c)] for p, c in enumerate(st.strategy_counts)]

    def qindex(s):
        return qs.index(tuple(block[p][x] for p, x in enumerate(s)))

    steps_matched = all(
        (qindex(st.profile(u)), p, qindex(st.profile(v))) in qedges
        for u, p, v in graph_of(epsilon_game(g, eps)).edges
    )

    # (b) a block preference forces a gap of eps/3 between all members
    third = eps / 3
    uniform_gap = all(
        a[p] + third < b[p]
        for p in range(2)
        for x, y in prefs[p].pairs
        for a in members[x]
        for b in members[y]
    )

    # (c) pattern-freeness passes to the quotient
    if find_forbidden_patterns(g):
        preserved = None
    else:
        preserved = not find_forbidden_patterns(q)
    return DerivedGame(q, part, eps, steps_matched, uniform_gap, preserved)

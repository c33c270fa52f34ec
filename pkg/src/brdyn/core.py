"""Game structures, games, subgames, slices and rectangles.

Profiles are tuples of strategy indices, one per player.  The outcome
tensor is stored flat in row-major mixed-radix order with player 0 slowest,
so for a two-player structure ``cells[i * m + j]`` is row ``i``, column ``j``.

Outcome tables are either all interned symbols (``str``) or all payoff
vectors (tuples of :class:`fractions.Fraction`, one entry per player).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import prod
from typing import Iterable, Iterator, Sequence

from .errors import (
    EmptySubset,
    GameError,
    NotAPermutation,
    NotPayoffMode,
    OutOfRange,
    TooFewPlayers,
    TwoPlayerOnly,
)
from .relations import Preference

Profile = tuple[int, ...]
SYMBOLIC = "symbolic"
PAYOFF = "payoff"


def to_payoff(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def format_outcome(label) -> str:
    if isinstance(label, str):
        return label
    return ",".join(str(v) for v in label)


@dataclass(frozen=True, eq=True)
class GameStructure:
    strategy_counts: tuple[int, ...]
    cells: tuple[int, ...]
    outcomes: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.strategy_counts)
        object.__setattr__(self, "strategy_counts", counts)
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if not counts or any(c < 1 for c in counts):
            raise GameError("every player needs at least one strategy")
        if len(self.cells) != prod(counts):
            raise GameError(f"tensor has {len(self.cells)} cells, expected {prod(counts)}")
        if not self.outcomes:
            raise GameError("outcome table is empty")
        n_out = len(self.outcomes)
        if any(not 0 <= o < n_out for o in self.cells):
            raise GameError("cell refers to an unknown outcome id")
        kinds = {isinstance(o, str) for o in self.outcomes}
        if len(kinds) != 1:
            raise GameError("symbolic and payoff outcomes cannot be mixed")
        if kinds == {False}:
            for o in self.outcomes:
                if not isinstance(o, tuple) or len(o) != len(counts) or not all(
                    isinstance(v, Fraction) for v in o
                ):
                    raise GameError(f"payoff outcome {o!r} must be a tuple of {len(counts)} Fractions")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_labels(cls, strategy_counts: Sequence[int], labels: Sequence) -> GameStructure:
        """Intern ``labels`` (one per cell, tensor order) in order of first appearance."""
        table: dict = {}
        cells = []
        for lab in labels:
            if not isinstance(lab, str):
                lab = to_payoff(lab)
            cells.append(table.setdefault(lab, len(table)))
        return cls(tuple(strategy_counts), tuple(cells), tuple(table))

    @classmethod
    def from_ids(cls, strategy_counts: Sequence[int], ids: Sequence[int], outcome_count: int | None = None) -> GameStructure:
        """Symbolic structure whose cells carry the given outcome ids verbatim (named ``o0``, ``o1``, ...)."""
        k = outcome_count if outcome_count is not None else max(ids) + 1
        return cls(tuple(strategy_counts), tuple(int(i) for i in ids), tuple(f"o{i}" for i in range(k)))

    @classmethod
    def from_table(cls, rows: Sequence[Sequence]) -> GameStructure:
        """Two-player structure from a list of rows."""
        n, m = len(rows), len(rows[0])
        if any(len(r) != m for r in rows):
            raise GameError("ragged table")
        return cls.from_labels((n, m), [c for r in rows for c in r])

    # -- geometry -------------------------------------------------------------

    @property
    def player_count(self) -> int:
        return len(self.strategy_counts)

    @property
    def mode(self) -> str:
        return SYMBOLIC if isinstance(self.outcomes[0], str) else PAYOFF

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        acc = 1
        for c in reversed(self.strategy_counts):
            out.append(acc)
            acc *= c
        return tuple(reversed(out))

    @property
    def size(self) -> int:
        return len(self.cells)

    def index(self, profile: Sequence[int]) -> int:
        self.check_profile(profile)
        return sum(s * st for s, st in zip(profile, self.strides))

    def profile(self, index: int) -> Profile:
        out = []
        for c in reversed(self.strategy_counts):
            index, r = divmod(index, c)
            out.append(r)
        return tuple(reversed(out))

    def profiles(self) -> Iterator[Profile]:
        return product(*(range(c) for c in self.strategy_counts))

    def check_profile(self, profile: Sequence[int]) -> None:
        if len(profile) != self.player_count:
            raise OutOfRange(f"profile {tuple(profile)} has wrong length")
        for p, (s, c) in enumerate(zip(profile, self.strategy_counts)):
            if not 0 <= s < c:
                raise OutOfRange(f"strategy {s} of player {p} out of range 0..{c - 1}")

    def outcome(self, profile: Sequence[int]) -> int:
        return self.cells[self.index(profile)]

    def label(self, profile: Sequence[int]):
        return self.outcomes[self.outcome(profile)]

    def matrix(self) -> list[list[int]]:
        """Outcome ids as a list of rows (two players only)."""
        if self.player_count != 2:
            raise TwoPlayerOnly("matrix view needs exactly two players")
        n, m = self.strategy_counts
        return [list(self.cells[i * m:(i + 1) * m]) for i in range(n)]

    def payoff(self, outcome_id: int, player: int) -> Fraction:
        if self.mode != PAYOFF:
            raise NotPayoffMode("structure has symbolic outcomes")
        return self.outcomes[outcome_id][player]

    def used_outcomes(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.cells)))

    def __str__(self) -> str:
        if self.player_count == 2:
            return "\n".join(
                " ".join(format_outcome(self.outcomes[o]) for o in row) for row in self.matrix()
            )
        return f"GameStructure{self.strategy_counts}"


@dataclass(frozen=True, eq=True)
class Game:
    structure: GameStructure
    preferences: tuple[Preference, ...]

    def __post_init__(self):
        object.__setattr__(self, "preferences", tuple(self.preferences))
        if len(self.preferences) != self.structure.player_count:
            raise GameError("need exactly one preference per player")
        n_out = len(self.structure.outcomes)
        for p in self.preferences:
            if p.outcome_count != n_out:
                raise GameError("preference is over a different outcome table")

    @classmethod
    def from_payoffs(cls, strategy_counts: Sequence[int], payoffs: Sequence[Sequence]) -> Game:
        """Payoff game; ``payoffs`` lists one payoff vector per cell in tensor order."""
        s = GameStructure.from_labels(strategy_counts, [to_payoff(v) for v in payoffs])
        return cls(s, payoff_preferences(s))

    @classmethod
    def from_payoff_table(cls, rows: Sequence[Sequence[Sequence]]) -> Game:
        n, m = len(rows), len(rows[0])
        if any(len(r) != m for r in rows):
            raise GameError("ragged table")
        return cls.from_payoffs((n, m), [c for r in rows for c in r])

    @property
    def player_count(self) -> int:
        return self.structure.player_count

    @property
    def strategy_counts(self) -> tuple[int, ...]:
        return self.structure.strategy_counts

    def prefers(self, player: int, s: Sequence[int], t: Sequence[int]) -> bool:
        """``s <_player t`` on profiles, induced through the outcome function."""
        st = self.structure
        return self.preferences[player].lt(st.outcome(s), st.outcome(t))

    def __str__(self) -> str:
        return str(self.structure)


def payoff_preferences(s: GameStructure) -> tuple[Preference, ...]:
    if s.mode != PAYOFF:
        raise NotPayoffMode("structure has symbolic outcomes")
    return tuple(Preference.from_ranks([o[p] for o in s.outcomes]) for p in range(s.player_count))


@dataclass(frozen=True, order=True)
class Rectangle:
    """A 2x2 sub game structure for players ``p < q``.

    ``context`` fixes the strategies of all other players as ``(player, strategy)``
    pairs in player order.
    """

    players: tuple[int, int]
    rows: tuple[int, int]
    cols: tuple[int, int]
    context: tuple[tuple[int, int], ...] = ()

    def corner(self, i: int, j: int, player_count: int = 2) -> Profile:
        """Profile with player ``p`` on ``rows[i]`` and player ``q`` on ``cols[j]``."""
        prof = [0] * player_count
        for pl, st in self.context:
            prof[pl] = st
        p, q = self.players
        prof[p] = self.rows[i]
        prof[q] = self.cols[j]
        return tuple(prof)

    def corners(self, player_count: int = 2) -> tuple[Profile, Profile, Profile, Profile]:
        """Corners in cyclic order (r0,c0), (r1,c0), (r1,c1), (r0,c1)."""
        return tuple(self.corner(i, j, player_count) for i, j in ((0, 0), (1, 0), (1, 1), (0, 1)))


def rectangles(s: GameStructure) -> Iterator[Rectangle]:
    """Every rectangle once: by player pair, then context, then rows, then columns."""
    n = s.player_count
    for p, q in combinations(range(n), 2):
        others = [r for r in range(n) if r not in (p, q)]
        for ctx in product(*(range(s.strategy_counts[r]) for r in others)):
            context = tuple(zip(others, ctx))
            for rows in combinations(range(s.strategy_counts[p]), 2):
                for cols in combinations(range(s.strategy_counts[q]), 2):
                    yield Rectangle((p, q), rows, cols, context)


def _check_subsets(counts, keep) -> list[list[int]]:
    if len(keep) != len(counts):
        raise OutOfRange("need one strategy subset per player")
    out = []
    for p, (sub, c) in enumerate(zip(keep, counts)):
        sub = sorted(set(sub))
        if not sub:
            raise EmptySubset(f"empty strategy subset for player {p}")
        if sub[0] < 0 or sub[-1] >= c:
            raise OutOfRange(f"strategy subset {sub} of player {p} out of range 0..{c - 1}")
        out.append(sub)
    return out


def restrict(s: GameStructure, keep: Sequence[Iterable[int]]) -> GameStructure:
    """Sub game structure on the product of ``keep``; indices re-packed ascending."""
    subs = _check_subsets(s.strategy_counts, keep)
    cells = tuple(s.cells[s.index(prof)] for prof in product(*subs))
    return GameStructure(tuple(len(x) for x in subs), cells, s.outcomes)


def subgame(g: Game, keep: Sequence[Iterable[int]]) -> Game:
    return Game(restrict(g.structure, keep), g.preferences)


def slice_game(g: Game, player: int, strategy: int) -> Game:
    """Fix ``player`` on ``strategy``; the sliced player and its preference disappear."""
    s = g.structure
    if s.player_count < 2:
        raise TooFewPlayers("slicing needs at least two players")
    if not 0 <= player < s.player_count:
        raise OutOfRange(f"no player {player}")
    if not 0 <= strategy < s.strategy_counts[player]:
        raise OutOfRange(f"strategy {strategy} of player {player} out of range")
    keep = [range(c) for c in s.strategy_counts]
    keep[player] = [strategy]
    sub = restrict(s, keep)
    counts = tuple(c for p, c in enumerate(sub.strategy_counts) if p != player)
    outcomes = sub.outcomes
    if s.mode == PAYOFF:
        if g.preferences == payoff_preferences(s):
            sliced = GameStructure.from_labels(
                counts, [tuple(v for p, v in enumerate(outcomes[o]) if p != player) for o in sub.cells]
            )
            return Game(sliced, payoff_preferences(sliced))
        # projected vectors could merge outcomes the kept preferences distinguish
        outcomes = tuple(f"({format_outcome(o)})" for o in outcomes)
    st = GameStructure(counts, sub.cells, outcomes)
    prefs = tuple(pr for p, pr in enumerate(g.preferences) if p != player)
    return Game(st, prefs)


def permute(s: GameStructure, perms: Sequence[Sequence[int]]) -> GameStructure:
    """Re-index strategies: new strategy ``i`` of player ``p`` is old strategy ``perms[p][i]``."""
    if len(perms) != s.player_count:
        raise NotAPermutation("need one permutation per player")
    for p, (perm, c) in enumerate(zip(perms, s.strategy_counts)):
        if sorted(perm) != list(range(c)):
            raise NotAPermutation(f"{list(perm)} is not a permutation of range({c})")
    cells = tuple(
        s.cells[s.index(tuple(perms[p][x] for p, x in enumerate(prof)))] for prof in s.profiles()
    )
    return GameStructure(s.strategy_counts, cells, s.outcomes)


def permute_profile(profile: Sequence[int], perms: Sequence[Sequence[int]]) -> Profile:
    """Where an old profile lands after :func:`permute` with the same ``perms``."""
    return tuple(list(perms[p]).index(x) for p, x in enumerate(profile))


def transpose(s: GameStructure) -> GameStructure:
    """Swap the two players of a two-player structure."""
    if s.player_count != 2:
        raise TwoPlayerOnly("transpose needs exactly two players")
    n, m = s.strategy_counts
    cells = tuple(s.cells[i * m + j] for j in range(m) for i in range(n))
    outcomes = s.outcomes
    if s.mode == PAYOFF:
        outcomes = tuple((o[1], o[0]) for o in outcomes)
    return GameStructure((m, n), cells, outcomes)


def transpose_game(g: Game) -> Game:
    return Game(transpose(g.structure), (g.preferences[1], g.preferences[0]))


def require_two_players(s: GameStructure | Game) -> None:
    if s.player_count != 2:
        raise TwoPlayerOnly(f"operation needs a two-player game, got {s.player_count} players")

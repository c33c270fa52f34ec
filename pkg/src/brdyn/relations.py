"""Preference relations over outcome ids.

A :class:`Preference` is a strict (irreflexive) binary relation ``x < y``
over ``range(outcome_count)``, read "y is preferred to x".  It is stored as
one bitmask per outcome, so membership tests are O(1).  The non-strict
relation ``x <= y`` is defined as ``not (y < x)`` and indifference as
``x <= y and y <= x``; neither is stored.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .errors import BadEps, CyclicPreference, GameError, NotPayoffMode


class Preference:
    def __init__(self, outcome_count: int, pairs: Iterable[tuple[int, int]] = ()):
        above = [0] * outcome_count
        for x, y in pairs:
            if not (0 <= x < outcome_count and 0 <= y < outcome_count):
                raise GameError(f"pair ({x}, {y}) outside outcome table of size {outcome_count}")
            if x == y:
                raise GameError(f"preference must be irreflexive, got ({x}, {x})")
            above[x] |= 1 << y
        self.outcome_count = outcome_count
        self._above = tuple(above)

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> Preference:
        n = len(masks)
        return cls(n, ((x, y) for x in range(n) for y in range(n) if masks[x] >> y & 1))

    @classmethod
    def from_ranks(cls, ranks: Sequence) -> Preference:
        """``x < y`` iff ``ranks[x] < ranks[y]``; always a strict weak order."""
        n = len(ranks)
        return cls(n, ((x, y) for x in range(n) for y in range(n) if ranks[x] < ranks[y]))

    @classmethod
    def from_order(cls, worst_to_best: Sequence[int], outcome_count: int | None = None) -> Preference:
        """Linear order listing outcomes from least to most preferred.

        Outcomes absent from the list (when ``outcome_count`` is larger) are
        left incomparable to everything.
        """
        n = len(worst_to_best) if outcome_count is None else outcome_count
        pairs = [
            (worst_to_best[i], worst_to_best[j])
            for i in range(len(worst_to_best))
            for j in range(i + 1, len(worst_to_best))
        ]
        return cls(n, pairs)

    # -- membership -------------------------------------------------------

    def lt(self, x: int, y: int) -> bool:
        return bool(self._above[x] >> y & 1)

    def le(self, x: int, y: int) -> bool:
        return not self._above[y] >> x & 1

    def sim(self, x: int, y: int) -> bool:
        return not (self._above[x] >> y & 1 or self._above[y] >> x & 1)

    def above(self, x: int) -> int:
        """Bitmask of outcomes strictly preferred to ``x``."""
        return self._above[x]

    @property
    def masks(self) -> tuple[int, ...]:
        return self._above

    @cached_property
    def pairs(self) -> frozenset[tuple[int, int]]:
        n = self.outcome_count
        return frozenset((x, y) for x in range(n) for y in range(n) if self._above[x] >> y & 1)

    def __contains__(self, pair) -> bool:
        x, y = pair
        return self.lt(x, y)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Preference):
            return NotImplemented
        return self.outcome_count == other.outcome_count and self._above == other._above

    def __hash__(self) -> int:
        return hash((self.outcome_count, self._above))

    def __repr__(self) -> str:
        body = ", ".join(f"{x}<{y}" for x, y in sorted(self.pairs))
        return f"Preference({self.outcome_count}: {body})"

    def issubset(self, other: Preference) -> bool:
        return all(a & ~b == 0 for a, b in zip(self._above, other._above))

    def restricted(self, keep: Sequence[int]) -> Preference:
        """Relation induced on ``keep``, renumbered by position in ``keep``."""
        pos = {x: i for i, x in enumerate(keep)}
        return Preference(
            len(keep), ((pos[x], pos[y]) for x, y in self.pairs if x in pos and y in pos)
        )

    def reversed(self) -> Preference:
        return Preference(self.outcome_count, ((y, x) for x, y in self.pairs))

    # -- order-theoretic properties (lazy, cached) ------------------------

    @cached_property
    def is_acyclic(self) -> bool:
        return _topological_order(self) is not None

    @cached_property
    def is_transitive(self) -> bool:
        above = self._above
        for x in range(self.outcome_count):
            for y in _bits(above[x]):
                if above[y] & ~above[x]:
                    return False
        return True

    @cached_property
    def is_pseudo_transitive(self) -> bool:
        n = self.outcome_count
        for x, y, z in product(range(n), repeat=3):
            if self.lt(x, y) and self.le(y, z) and not self.lt(x, z):
                return False
            if self.le(x, y) and self.lt(y, z) and not self.lt(x, z):
                return False
        return True

    @cached_property
    def is_strict_weak_order(self) -> bool:
        if not self.is_transitive:
            return False
        n = self.outcome_count
        for x, y, z in product(range(n), repeat=3):
            if self.sim(x, y) and self.sim(y, z) and not self.sim(x, z):
                return False
        return True

    @cached_property
    def is_linear(self) -> bool:
        n = self.outcome_count
        if not self.is_transitive:
            return False
        return all(self.lt(x, y) or self.lt(y, x) for x in range(n) for y in range(x + 1, n))

    def ranks(self) -> tuple[int, ...]:
        """Dense ranks (0 = worst) of a strict weak order."""
        if not self.is_strict_weak_order:
            raise GameError("ranks are only defined for strict weak orders")
        below = [sum(1 for y in range(self.outcome_count) if self.lt(y, x)) for x in range(self.outcome_count)]
        levels = sorted(set(below))
        return tuple(levels.index(b) for b in below)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _topological_order(p: Preference) -> list[int] | None:
    """Worst-to-best order, smallest id first among ready outcomes; None if cyclic."""
    n = p.outcome_count
    indeg = [0] * n
    for x in range(n):
        for y in _bits(p.above(x)):
            indeg[y] += 1
    ready = [x for x in range(n) if indeg[x] == 0]
    order = []
    while ready:
        ready.sort()
        x = ready.pop(0)
        order.append(x)
        for y in _bits(p.above(x)):
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    return order if len(order) == n else None


def is_acyclic(p: Preference) -> bool:
    return p.is_acyclic


def is_transitive(p: Preference) -> bool:
    return p.is_transitive


def is_pseudo_transitive(p: Preference) -> bool:
    return p.is_pseudo_transitive


def is_strict_weak_order(p: Preference) -> bool:
    return p.is_strict_weak_order


def transitive_closure(p: Preference) -> Preference:
    """Smallest transitive relation containing ``p``; a cycle would make it reflexive."""
    if not p.is_acyclic:
        raise CyclicPreference("the closure of a cyclic relation is not irreflexive")
    above = list(p.masks)
    changed = True
    while changed:
        changed = False
        for x in range(p.outcome_count):
            extra = 0
            for y in _bits(above[x]):
                extra |= above[y]
            if extra & ~above[x]:
                above[x] |= extra
                changed = True
    return Preference.from_masks(above)


def linearize(p: Preference) -> Preference:
    """Linear extension of ``p``; ties between ready outcomes go to the smaller id first."""
    order = _topological_order(p)
    if order is None:
        raise CyclicPreference("cannot linearize a cyclic preference")
    return Preference.from_order(order)


def epsilon_preference(payoffs: Sequence[Sequence[Fraction]], component: int, eps) -> Preference:
    """``x < y`` iff ``payoffs[x][component] + eps < payoffs[y][component]``.

    ``payoffs`` is the outcome table of a payoff-mode structure.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise BadEps(f"eps must be nonnegative, got {eps}")
    for row in payoffs:
        if not isinstance(row, tuple) or not all(isinstance(c, Fraction) for c in row):
            raise NotPayoffMode("epsilon preferences need a payoff outcome table")
    n = len(payoffs)
    vals = [row[component] for row in payoffs]
    return Preference(n, ((x, y) for x in range(n) for y in range(n) if vals[x] + eps < vals[y]))

"""Markov chains on profiles driven by (maximising) improvement.

From a non-sink profile the chain stays put with probability lambda and
otherwise moves along a uniformly chosen outgoing edge; sinks absorb.

Simulation draws raw 64-bit words from numpy's PCG64 seeded with the given
integer.  One word decides one step: with lambda = p/q the chain stays when
``word % q < p`` and otherwise follows edge number ``(word // q) % degree``
in ascending target order.  The rule is integer-only, so traces are identical
on every platform and for both kernel backends.  (The residues carry a bias
below 2**-60, far under anything a test can see.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .core import Game, Profile
from .dynamics import IMPROVEMENT, graph_of, is_weakly_acyclic, nash_equilibria
from .errors import BadLambda, CyclicPreference, OutOfRange
from .graphs import bottom_components

CHUNK = 1 << 14


@dataclass(frozen=True)
class GameChain:
    game: Game
    kind: str
    lam: Fraction
    succ: tuple[tuple[int, ...], ...]  # sorted improvement targets per state

    @property
    def size(self) -> int:
        return len(self.succ)

    def transitions(self, u: int) -> dict[int, Fraction]:
        """Exact transition row of state ``u``."""
        out = self.succ[u]
        if not out:
            return {u: Fraction(1)}
        w = (1 - self.lam) / len(out)
        row = {v: w for v in out}
        if self.lam:
            row[u] = self.lam
        return row

    def matrix(self) -> list[list[Fraction]]:
        rows = []
        for u in range(self.size):
            r = [Fraction(0)] * self.size
            for v, w in self.transitions(u).items():
                r[v] += w
            rows.append(r)
        return rows

    def absorbing(self) -> list[bool]:
        return [not s for s in self.succ]

    def csr(self) -> tuple[list[int], list[int]]:
        offsets, targets = [0], []
        for out in self.succ:
            targets.extend(out)
            offsets.append(len(targets))
        return offsets, targets


def build_chain(g: Game, kind: str = IMPROVEMENT, lam=Fraction(1, 2)) -> GameChain:
    lam = Fraction(lam)
    if not 0 <= lam < 1:
        raise BadLambda(f"lambda must lie in [0, 1), got {lam}")
    graph = graph_of(g, kind)
    return GameChain(g, kind, lam, tuple(tuple(sorted(set(s))) for s in graph.succ))


def recurrent_profiles(c: GameChain) -> frozenset[Profile]:
    """States of the bottom strongly connected components of the transition graph."""
    st = c.game.structure
    return frozenset(st.profile(u) for comp in bottom_components(c.succ) for u in comp)


@dataclass(frozen=True)
class ChainVerdict:
    """``holds`` says the two sides agree; ``weakly_terminating`` is the common value."""

    holds: bool
    weakly_terminating: bool
    recurrent_are_ne: bool
    recurrent: frozenset[Profile]


def check_observation18(g: Game, kind: str = IMPROVEMENT) -> ChainVerdict:
    """Compare weak termination of the graph with "recurrent states are exactly the NE"."""
    for p in g.preferences:
        if not p.is_acyclic:
            raise CyclicPreference("preferences must be acyclic")
    wt = bool(is_weakly_acyclic(g, kind))
    rec = recurrent_profiles(build_chain(g, kind))
    sinks = frozenset(g.structure.profile(u) for u, out in enumerate(graph_of(g, kind).succ) if not out)
    same = rec == sinks
    return ChainVerdict(wt == same, wt, same, rec)


@dataclass(frozen=True)
class Trace:
    seed: int
    lam: Fraction
    profiles: tuple[Profile, ...]
    absorbed: bool

    @property
    def steps(self) -> int:
        return len(self.profiles) - 1

    def export(self) -> str:
        lines = [f"# seed={self.seed} lambda={self.lam}"]
        lines.extend(" ".join(str(x) for x in s) for s in self.profiles)
        return "\n".join(lines) + "\n"


def _raw(seed: int):
    return np.random.Generator(np.random.PCG64(seed)).bit_generator


def simulate(c: GameChain, start: Sequence[int], seed: int, max_steps: int) -> Trace:
    """Full trajectory from ``start``; stops on absorption or after ``max_steps`` draws."""
    st = c.game.structure
    try:
        st.check_profile(start)
    except Exception as exc:
        raise OutOfRange(str(exc)) from exc
    if max_steps < 0:
        raise OutOfRange("max_steps must be non-negative")
    p, q = c.lam.numerator, c.lam.denominator
    u = st.index(start)
    path = [u]
    bits = _raw(seed)
    left = max_steps
    while left > 0 and c.succ[u]:
        block = bits.random_raw(min(left, CHUNK))
        for r in block.tolist():
            if not c.succ[u]:
                break
            if r % q >= p:
                out = c.succ[u]
                u = out[(r // q) % len(out)]
            path.append(u)
        left -= len(block)
    return Trace(seed, c.lam, tuple(st.profile(v) for v in path), not c.succ[u])


@dataclass(frozen=True)
class RunResult:
    seed: int
    start: Profile
    final: Profile
    steps: int
    absorbed: bool


def run_until_absorbed(c: GameChain, start: Sequence[int], seed: int, max_steps: int, pure: bool = False) -> RunResult:
    """Same dynamics as ``simulate`` without recording the path, using the step kernel."""
    st = c.game.structure
    st.check_profile(start)
    offsets, targets = c.csr()
    absorbing = c.absorbing()
    p, q = c.lam.numerator, c.lam.denominator
    state, steps, absorbed = st.index(start), 0, absorbing[st.index(start)]
    bits = _raw(seed)
    while not absorbed and steps < max_steps:
        block = bits.random_raw(min(max_steps - steps, CHUNK))
        state, used, absorbed = kernels.walk(offsets, targets, absorbing, state, p, q, block, pure=pure)
        steps += used
    return RunResult(seed, tuple(start), st.profile(state), steps, bool(absorbed))


def monte_carlo(c: GameChain, runs: int, max_steps: int, base_seed: int = 0, pure: bool = False) -> list[RunResult]:
    """Run ``runs`` chains; run ``r`` uses seed ``base_seed + r`` and starts at profile index ``r mod size``."""
    st = c.game.structure
    return [
        run_until_absorbed(c, st.profile(r % c.size), base_seed + r, max_steps, pure=pure)
        for r in range(runs)
    ]


def absorbed_at_ne(results: Sequence[RunResult], g: Game) -> int:
    nes = nash_equilibria(g)
    return sum(1 for r in results if r.absorbed and r.final in nes)

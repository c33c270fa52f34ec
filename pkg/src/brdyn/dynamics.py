"""Improvement dynamics: graphs, Nash equilibria, termination and reachability.

Profiles are handled internally by their flat tensor index; public results
use profile tuples.  An edge ``(u, p, v)`` means player ``p`` converts
profile ``u`` into ``v`` and strictly prefers the outcome of ``v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .core import PAYOFF, Game, Profile, require_two_players, subgame
from .errors import (
    BadShape,
    HypothesisViolated,
    NoNE,
    NotAlternating,
    NotAntagonist,
    NotConvertible,
    NotPayoffMode,
)
from .graphs import distances_to, find_cycle, simple_cycles, strongly_connected_components
from .relations import Preference, linearize

IMPROVEMENT = "improvement"
MAXIMISING = "maximising"


@dataclass(frozen=True)
class ImprovementGraph:
    game: Game
    kind: str
    edges: tuple[tuple[int, int, int], ...]

    @cached_property
    def succ(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.game.structure.size)]
        for u, _, v in self.edges:
            out[u].append(v)
        return out

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int, int]]:
        return frozenset(self.edges)

    @cached_property
    def sinks(self) -> tuple[int, ...]:
        return tuple(u for u, vs in enumerate(self.succ) if not vs)

    def has_edge(self, s: Sequence[int], t: Sequence[int]) -> bool:
        st = self.game.structure
        u, v = st.index(s), st.index(t)
        return any(e[0] == u and e[2] == v for e in self.edges)

    def profile_edges(self) -> list[tuple[Profile, int, Profile]]:
        st = self.game.structure
        return [(st.profile(u), p, st.profile(v)) for u, p, v in self.edges]

    def is_acyclic(self) -> bool:
        return find_cycle(self.succ) is None


def _deviations(g: Game, u: int, player: int) -> list[int]:
    st = g.structure
    stride = st.strides[player]
    own = (u // stride) % st.strategy_counts[player]
    base = u - own * stride
    return [base + k * stride for k in range(st.strategy_counts[player]) if k != own]


def _improving(g: Game, u: int, player: int) -> list[int]:
    cells = g.structure.cells
    pref = g.preferences[player]
    return [v for v in _deviations(g, u, player) if pref.lt(cells[u], cells[v])]


def improvement_graph(g: Game) -> ImprovementGraph:
    edges = []
    for u in range(g.structure.size):
        for p in range(g.player_count):
            edges.extend((u, p, v) for v in _improving(g, u, p))
    return ImprovementGraph(g, IMPROVEMENT, tuple(edges))


def maximising_improvement_graph(g: Game) -> ImprovementGraph:
    """Keep an improving move only if no other improving move of the same player beats it."""
    cells = g.structure.cells
    edges = []
    for u in range(g.structure.size):
        for p in range(g.player_count):
            pref = g.preferences[p]
            targets = _improving(g, u, p)
            edges.extend(
                (u, p, v)
                for v in targets
                if not any(pref.lt(cells[v], cells[w]) for w in targets)
            )
    return ImprovementGraph(g, MAXIMISING, tuple(edges))


def graph_of(g: Game, kind: str = IMPROVEMENT) -> ImprovementGraph:
    if kind == IMPROVEMENT:
        return improvement_graph(g)
    if kind == MAXIMISING:
        return maximising_improvement_graph(g)
    raise ValueError(f"unknown graph kind {kind!r}")


def nash_equilibria(g: Game) -> frozenset[Profile]:
    st = g.structure
    return frozenset(
        st.profile(u)
        for u in range(st.size)
        if not any(_improving(g, u, p) for p in range(g.player_count))
    )


def _ne_indices(g: Game) -> list[int]:
    return [u for u in range(g.structure.size) if not any(_improving(g, u, p) for p in range(g.player_count))]


@dataclass(frozen=True)
class FIPVerdict:
    fip: bool
    cycle: tuple[Profile, ...] | None = None

    def __bool__(self) -> bool:
        return self.fip


def has_fip(g: Game, kind: str = IMPROVEMENT) -> FIPVerdict:
    graph = graph_of(g, kind)
    cyc = find_cycle(graph.succ)
    if cyc is None:
        return FIPVerdict(True)
    return FIPVerdict(False, tuple(g.structure.profile(u) for u in cyc))


@dataclass(frozen=True)
class WeakVerdict:
    weakly_acyclic: bool
    max_distance: int | None = None
    trapped: Profile | None = None

    def __bool__(self) -> bool:
        return self.weakly_acyclic


def ne_distances(g: Game, kind: str = IMPROVEMENT) -> list[int | None]:
    """Shortest number of steps from each profile (by index) to some NE."""
    graph = graph_of(g, kind)
    return distances_to(graph.succ, graph.sinks)


def is_weakly_acyclic(g: Game, kind: str = IMPROVEMENT) -> WeakVerdict:
    dist = ne_distances(g, kind)
    for u, d in enumerate(dist):
        if d is None:
            return WeakVerdict(False, trapped=g.structure.profile(u))
    return WeakVerdict(True, max_distance=max(dist))


def players_moving_infinitely(g: Game) -> frozenset[int]:
    """Players owning an improvement edge inside a non-trivial SCC.

    Exactly the players who can move infinitely often in some improvement
    sequence of a finite game.
    """
    graph = improvement_graph(g)
    comp_of = {}
    for k, comp in enumerate(strongly_connected_components(graph.succ)):
        for u in comp:
            comp_of[u] = k
    return frozenset(p for u, p, v in graph.edges if comp_of[u] == comp_of[v])


# -- sheaths --------------------------------------------------------------------


def mover(s: Sequence[int], t: Sequence[int]) -> int:
    """The unique player whose coordinate differs between ``s`` and ``t``."""
    diff = [p for p, (x, y) in enumerate(zip(s, t)) if x != y]
    if len(diff) != 1:
        raise NotConvertible(f"{tuple(s)} -> {tuple(t)} is not a single-player move")
    return diff[0]


def movers(path: Sequence[Sequence[int]]) -> list[int]:
    return [mover(path[i], path[i + 1]) for i in range(len(path) - 1)]


@dataclass(frozen=True)
class Sheath:
    path: tuple[Profile, ...]
    extra: tuple[Profile, ...]

    @cached_property
    def all(self) -> frozenset[Profile]:
        return frozenset(self.path) | frozenset(self.extra)

    def __contains__(self, profile) -> bool:
        return tuple(profile) in self.all

    def __len__(self) -> int:
        return len(self.all)


def sheath(g: Game, path: Sequence[Sequence[int]]) -> Sheath:
    """Path profiles plus the missing corner of every two-step window."""
    require_two_players(g)
    path = [tuple(s) for s in path]
    for s in path:
        g.structure.check_profile(s)
    who = movers(path)
    for i in range(len(who) - 1):
        if who[i] == who[i + 1]:
            raise NotAlternating(f"steps {i} and {i + 1} are both moves of player {who[i]}")
    extra = []
    for i in range(len(path) - 2):
        p = who[i]
        corner = list(path[i + 2])
        corner[p] = path[i][p]
        extra.append(tuple(corner))
    return Sheath(tuple(path), tuple(extra))


def cycle_sheath(g: Game, cycle: Sequence[Sequence[int]]) -> Sheath:
    """Sheath of a closed path, windows wrapping around the closing step."""
    cycle = [tuple(s) for s in cycle]
    closed = cycle + cycle[:2]
    return sheath(g, closed)


def _within_rectangles(g: Game, profiles: frozenset[Profile]):
    from .core import Rectangle

    rows = sorted({s[0] for s in profiles})
    cols = sorted({s[1] for s in profiles})
    for i, r0 in enumerate(rows):
        for r1 in rows[i + 1:]:
            for j, c0 in enumerate(cols):
                for c1 in cols[j + 1:]:
                    if {(r0, c0), (r0, c1), (r1, c0), (r1, c1)} <= profiles:
                        yield Rectangle((0, 1), (r0, r1), (c0, c1))


def forbidden_within(g: Game, profiles: frozenset[Profile], strong_only: bool = False) -> list:
    """Forbidden pattern matches on rectangles whose four corners lie in ``profiles``."""
    from .patterns import STRONG, WEAK, classify_rectangle

    wanted = STRONG if strong_only else STRONG | WEAK
    out = []
    for r in _within_rectangles(g, profiles):
        out.extend(m for m in classify_rectangle(g, r) if m.kind in wanted)
    return out


def _shortest_within(graph: ImprovementGraph, allowed: frozenset[Profile], s, t, need_both: bool) -> int | None:
    st = graph.game.structure
    ok = {st.index(p) for p in allowed}
    src, dst = st.index(s), st.index(t)
    by_src: dict[int, list[tuple[int, int]]] = {}
    for u, p, v in graph.edges:
        if u in ok and v in ok:
            by_src.setdefault(u, []).append((p, v))
    full = 0b11 if need_both else 0
    start = (src, 0)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u, mask = queue.popleft()
        if u == dst and (mask & full) == full and dist[(u, mask)] > 0:
            return dist[(u, mask)]
        for p, v in by_src.get(u, ()):
            nxt = (v, mask | (1 << p))
            if nxt not in dist:
                dist[nxt] = dist[(u, mask)] + 1
                queue.append(nxt)
    return None


@dataclass(frozen=True)
class PathVerdict:
    """Outcome of a hypothesis-gated path check.

    ``status`` is ``"holds"``, ``"hypothesis_failed"`` (with ``failed`` naming
    the first failing hypothesis) or ``"counterexample"``.
    """

    status: str
    failed: str | None = None
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _check_shape(g: Game, path, length: int, graph: ImprovementGraph) -> tuple[int, int]:
    require_two_players(g)
    if len(path) != length:
        raise BadShape(f"expected a path of {length} profiles, got {len(path)}")
    try:
        who = movers(path)
    except NotConvertible as exc:
        raise BadShape(str(exc)) from exc
    first, second = who[0], who[1]
    if first == second or any(w != (first if i % 2 == 0 else second) for i, w in enumerate(who)):
        raise BadShape(f"movers {who} do not alternate")
    for i in range(len(path) - 1):
        if not graph.has_edge(path[i], path[i + 1]):
            raise BadShape(f"step {i} is not a {graph.kind} step")
    return first, second


def check_lemma7(g: Game, path: Sequence[Sequence[int]]) -> PathVerdict:
    """Six-profile improvement path ``s0..s5`` moved by b, a, b, a, b.

    Player b is whoever moves first.  When every hypothesis holds, asserts
    ``v(s3) <_a v(s4) <=_a v(s1)``.
    """
    path = [tuple(s) for s in path]
    graph = improvement_graph(g)
    b, a = _check_shape(g, path, 6, graph)
    if len(set(path)) != 6:
        return PathVerdict("hypothesis_failed", "distinct")
    for p in g.preferences:
        if not (p.is_transitive and p.is_pseudo_transitive):
            return PathVerdict("hypothesis_failed", "transitivity")
    sh = sheath(g, path)
    if forbidden_within(g, sh.all):
        return PathVerdict("hypothesis_failed", "forbidden pattern")
    short = _shortest_within(graph, sh.all, path[0], path[5], need_both=True)
    if short is not None and short < 5:
        return PathVerdict("hypothesis_failed", "minimality", f"shortcut of length {short}")
    cells = g.structure
    pa = g.preferences[a]
    o1, o3, o4 = (cells.outcome(path[i]) for i in (1, 3, 4))
    if pa.lt(o3, o4) and pa.le(o4, o1):
        return PathVerdict("holds")
    return PathVerdict("counterexample", detail=f"path {path}")


def check_lemma9(g: Game, path: Sequence[Sequence[int]], from_start: bool = True) -> PathVerdict:
    """Five-profile maximising path ``s0..s4`` moved by b, a, b, a.

    When every hypothesis holds, asserts ``v(s3) <_b v(s1)`` or that the
    profile combining a's strategy in ``s1`` with b's strategy in ``s3`` is an NE.
    Minimality forbids a shorter maximising path inside the sheath from ``s0``
    to ``s4``; with ``from_start=False`` only paths from ``s1`` count, a weaker
    hypothesis under which the conclusion can fail.
    """
    path = [tuple(s) for s in path]
    graph = maximising_improvement_graph(g)
    b, a = _check_shape(g, path, 5, graph)
    for p in g.preferences:
        if not p.is_strict_weak_order:
            return PathVerdict("hypothesis_failed", "strict weak order")
    sh = sheath(g, path)
    if forbidden_within(g, sh.all, strong_only=True):
        return PathVerdict("hypothesis_failed", "strongly forbidden pattern")
    first = 0 if from_start else 1
    short = _shortest_within(graph, sh.all, path[first], path[4], need_both=False)
    if short is not None and short < 4 - first:
        return PathVerdict("hypothesis_failed", "minimality", f"shortcut of length {short}")
    st = g.structure
    corner = [0, 0]
    corner[a] = path[1][a]
    corner[b] = path[3][b]
    corner = tuple(corner)
    if g.preferences[b].lt(st.outcome(path[3]), st.outcome(path[1])):
        return PathVerdict("holds", detail="decrease")
    if corner in nash_equilibria(g):
        return PathVerdict("holds", detail=f"NE {corner}")
    return PathVerdict("counterexample", detail=f"path {path}")


@dataclass(frozen=True)
class SheathNEVerdict:
    """``kind`` is ``"terminates"``, ``"sheath_ne"`` or ``"counterexample"``."""

    kind: str
    witness: Profile | None = None
    cycle: tuple[Profile, ...] | None = None
    cycles_checked: int = 0


def check_sheath_ne_hypotheses(g: Game) -> None:
    from .patterns import find_forbidden_patterns

    require_two_players(g)
    for p in g.preferences:
        if not p.is_strict_weak_order:
            raise HypothesisViolated("strict weak order preferences required")
    if find_forbidden_patterns(g, strong=True):
        raise HypothesisViolated("strongly forbidden pattern present")


def max_improvement_sheath_ne(g: Game, check_hypotheses: bool = True) -> SheathNEVerdict:
    """Either maximising improvement terminates, or every maximising cycle's sheath has an NE.

    Every simple cycle of the maximising graph is examined, its sheath taken
    with windows wrapping around the closing step.
    """
    if check_hypotheses:
        check_sheath_ne_hypotheses(g)
    graph = maximising_improvement_graph(g)
    if graph.is_acyclic():
        return SheathNEVerdict("terminates")
    st = g.structure
    nes = nash_equilibria(g)
    witness = None
    cycles = simple_cycles(graph.succ)
    for cyc in cycles:
        profiles = [st.profile(u) for u in cyc]
        found = sorted(cycle_sheath(g, profiles).all & nes)
        if not found:
            return SheathNEVerdict("counterexample", cycle=tuple(profiles), cycles_checked=len(cycles))
        if witness is None:
            witness = found[0]
    return SheathNEVerdict("sheath_ne", witness=witness, cycles_checked=len(cycles))


# -- potentials -------------------------------------------------------------------


def _require_payoff(g: Game) -> None:
    if g.structure.mode != PAYOFF:
        raise NotPayoffMode("potential functions need payoff outcomes")


def _payoff(g: Game, u: int, p: int) -> Fraction:
    st = g.structure
    return st.outcomes[st.cells[u]][p]


def exact_potential(g: Game) -> dict[Profile, Fraction] | None:
    """Exact potential by spanning-tree propagation plus full verification."""
    _require_payoff(g)
    st = g.structure
    pot: dict[int, Fraction] = {0: _payoff(g, 0, 0)}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for p in range(g.player_count):
            for v in _deviations(g, u, p):
                if v not in pot:
                    pot[v] = pot[u] + _payoff(g, v, p) - _payoff(g, u, p)
                    queue.append(v)
    for u in range(st.size):
        for p in range(g.player_count):
            for v in _deviations(g, u, p):
                if pot[v] - pot[u] != _payoff(g, v, p) - _payoff(g, u, p):
                    return None
    return {st.profile(u): pot[u] for u in range(st.size)}


def ordinal_potential_exists(g: Game) -> bool:
    """Merge profiles joined by indifferent deviations, then require strict deviations to be acyclic."""
    _require_payoff(g)
    st = g.structure
    parent = list(range(st.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    strict = []
    for u in range(st.size):
        for p in range(g.player_count):
            for v in _deviations(g, u, p):
                du, dv = _payoff(g, u, p), _payoff(g, v, p)
                if du == dv:
                    parent[find(u)] = find(v)
                elif du < dv:
                    strict.append((u, v))
    roots = sorted({find(u) for u in range(st.size)})
    pos = {r: i for i, r in enumerate(roots)}
    succ: list[list[int]] = [[] for _ in roots]
    for u, v in strict:
        cu, cv = pos[find(u)], pos[find(v)]
        if cu == cv:
            return False
        succ[cu].append(cv)
    return find_cycle(succ) is None


# -- structural results on weak acyclicity ---------------------------------------


@dataclass(frozen=True)
class AntagonistVerdict:
    holds: bool
    max_distance: int


def is_antagonist(g: Game) -> bool:
    require_two_players(g)
    pa, pb = g.preferences
    n = pa.outcome_count
    return all(pa.lt(x, y) == pb.lt(y, x) for x in range(n) for y in range(n))


def antagonist_weak_acyclicity(g: Game) -> AntagonistVerdict:
    """Every profile of an antagonist game with an NE reaches one in at most three steps."""
    require_two_players(g)
    if not is_antagonist(g):
        raise NotAntagonist("preferences are not reverses of each other")
    if not _ne_indices(g):
        raise NoNE("the game has no Nash equilibrium")
    dist = ne_distances(g)
    worst = max(d if d is not None else 10**9 for d in dist)
    return AntagonistVerdict(worst <= 3, worst)


def refine_ties(g: Game) -> tuple[Game, list[list[tuple[int, int]]]]:
    """Linear refinement of every preference (ties: smaller outcome id ranked lower).

    Returns the refined game and, per player, the pairs that were added.
    """
    refined = []
    added = []
    for p in g.preferences:
        lin = linearize(p)
        refined.append(lin)
        added.append(sorted(lin.pairs - p.pairs))
    return Game(g.structure, tuple(refined)), added


def _linear_on_used(g: Game, p: Preference) -> bool:
    used = g.structure.used_outcomes()
    return p.restricted(used).is_linear


def removable_strategy(g: Game) -> tuple[int, int] | None:
    """A strategy whose deletion keeps maximising improvement weakly terminating.

    Players are tried in order, strategies ascending.  Returns None only if no
    such strategy exists, which would contradict the guarantee for linear
    preferences.
    """
    require_two_players(g)
    for p in g.preferences:
        if not _linear_on_used(g, p):
            raise HypothesisViolated("preferences must be linear orders on the occurring outcomes")
    if min(g.strategy_counts) < 2:
        raise HypothesisViolated("both players need at least two strategies")
    if not is_weakly_acyclic(g, MAXIMISING):
        raise HypothesisViolated("maximising improvement is not weakly terminating")
    counts = g.strategy_counts
    for player in range(2):
        for s in range(counts[player]):
            keep = [list(range(c)) for c in counts]
            keep[player].remove(s)
            if is_weakly_acyclic(subgame(g, keep), MAXIMISING):
                return (player, s)
    return None

"""The eight 2x2 patterns, forbidden-pattern scans and forbidden rectangles.

Every pattern is stated on a template rectangle with corners

    x t
    y z

where template player ``a`` moves vertically (x<->y, t<->z) and template
player ``b`` horizontally.  All eight share the path ``x ->a y ->b z``.  A
concrete rectangle matches a pattern if one of its eight symmetries (row
swap, column swap, player swap) places its corners on the template so that
the pattern's constraints hold literally on the four outcomes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

from .core import Game, GameStructure, Profile, Rectangle, rectangles, require_two_players
from .errors import BadPath
from .relations import Preference, linearize


class PatternKind(enum.Enum):
    EC = "elementary cycle"
    PUB = "Pareto-useful bypass"
    PUC = "Pareto-useless confluence"
    PHC = "Pareto-harmless confluence"
    IS = "indifferent start"
    IA = "indifferent arrival"
    CS = "conflictual start"
    CA = "conflictual arrival"


STRONG = frozenset({PatternKind.EC, PatternKind.PUB})
WEAK = frozenset({PatternKind.PUC})
FORBIDDEN = STRONG | WEAK


def _holds(kind: PatternKind, lt, x, y, z, t) -> bool:
    """``lt(P, u, w)`` is ``u <_P w`` with P in {"a", "b"}."""

    def le(P, u, w):
        return not lt(P, w, u)

    def sim(P, u, w):
        return le(P, u, w) and le(P, w, u)

    if not (lt("a", x, y) and lt("b", y, z)):
        return False
    if kind is PatternKind.EC:
        return lt("a", z, t) and lt("b", t, x)
    if kind is PatternKind.PUB:
        return lt("a", z, t) and le("b", x, t) and lt("a", x, t)
    if kind is PatternKind.PUC:
        return lt("b", x, t) and lt("a", t, z) and lt("b", z, x)
    if kind is PatternKind.PHC:
        return lt("b", x, t) and lt("a", t, z) and le("b", x, z) and le("a", x, z)
    if kind is PatternKind.IS:
        return sim("b", x, t) and le("a", t, z)
    if kind is PatternKind.IA:
        return le("b", x, t) and sim("a", t, z)
    if kind is PatternKind.CS:
        return le("b", x, t) and le("a", t, x)
    if kind is PatternKind.CA:
        return le("b", z, t) and le("a", t, z)
    raise AssertionError(kind)


@dataclass(frozen=True)
class Symmetry:
    """Row flip, column flip and player swap, packed as ``fr | fc << 1 | swap << 2``."""

    code: int

    @property
    def flip_rows(self) -> bool:
        return bool(self.code & 1)

    @property
    def flip_cols(self) -> bool:
        return bool(self.code & 2)

    @property
    def swap(self) -> bool:
        return bool(self.code & 4)

    def place(self, r: Rectangle, player_count: int = 2) -> tuple[dict[str, Profile], int, int]:
        """Actual profiles for template corners x, y, z, t and the actual players a, b."""
        fr, fc = int(self.flip_rows), int(self.flip_cols)
        p, q = r.players
        spots = {"x": (0, 0), "y": (1, 0), "z": (1, 1), "t": (0, 1)}
        out = {}
        for name, (i, j) in spots.items():
            if self.swap:
                out[name] = r.corner(j ^ fr, i ^ fc, player_count)
            else:
                out[name] = r.corner(i ^ fr, j ^ fc, player_count)
        a, b = (q, p) if self.swap else (p, q)
        return out, a, b


SYMMETRIES = tuple(Symmetry(c) for c in range(8))


@dataclass(frozen=True)
class PatternMatch:
    rectangle: Rectangle
    kind: PatternKind
    symmetry: Symmetry

    def recheck(self, g: Game) -> bool:
        return _matches(g, self.rectangle, self.kind, self.symmetry)


def _matches(g: Game, r: Rectangle, kind: PatternKind, sym: Symmetry) -> bool:
    st = g.structure
    spots, a, b = sym.place(r, st.player_count)
    v = {name: st.outcome(prof) for name, prof in spots.items()}
    prefs = {"a": g.preferences[a], "b": g.preferences[b]}

    def lt(P, u, w):
        return prefs[P].lt(u, w)

    return _holds(kind, lt, v["x"], v["y"], v["z"], v["t"])


def classify_rectangle(g: Game, r: Rectangle) -> list[PatternMatch]:
    """All (kind, symmetry) pairs under which the rectangle matches, kinds in declaration order."""
    return [
        PatternMatch(r, kind, sym)
        for kind in PatternKind
        for sym in SYMMETRIES
        if _matches(g, r, kind, sym)
    ]


def kinds_of(matches) -> set[PatternKind]:
    return {m.kind for m in matches}


def find_forbidden_patterns(g: Game, strong: bool = False) -> list[PatternMatch]:
    """One match per (rectangle, forbidden kind) occurring in the game.

    A rectangle matching a kind under several symmetries is reported once,
    with the first symmetry in code order.
    """
    require_two_players(g)
    wanted = STRONG if strong else FORBIDDEN
    out = []
    for r in rectangles(g.structure):
        seen = set()
        for m in classify_rectangle(g, r):
            if m.kind in wanted and m.kind not in seen:
                seen.add(m.kind)
                out.append(m)
    return out


def length_two_paths(g: Game, r: Rectangle) -> list[tuple[Profile, Profile, Profile]]:
    """Improvement paths of two steps turning a corner of the rectangle."""
    corners = r.corners(g.player_count)
    out = []
    for k in range(4):
        for step in (1, -1):
            s0, s1, s2 = corners[k], corners[(k + step) % 4], corners[(k + 2 * step) % 4]
            if _improves(g, s0, s1) and _improves(g, s1, s2):
                out.append((s0, s1, s2))
    return out


def _improves(g: Game, s: Profile, t: Profile) -> bool:
    diff = [p for p in range(len(s)) if s[p] != t[p]]
    return len(diff) == 1 and g.prefers(diff[0], s, t)


def observation5_cover(g: Game, r: Rectangle, path) -> bool:
    """Whether a rectangle carrying the given two-step path matches some pattern."""
    path = tuple(tuple(s) for s in path)
    if path not in length_two_paths(g, r):
        raise BadPath(f"{path} is not a two-step improvement path along the rectangle")
    return bool(classify_rectangle(g, r))


# -- forbidden rectangles on structures --------------------------------------------


def is_forbidden_rectangle(s: GameStructure, r: Rectangle) -> bool:
    """All four adjacent outcome pairs around the rectangle differ."""
    require_two_players(s)
    c = [s.outcome(p) for p in r.corners(s.player_count)]
    return all(c[k] != c[(k + 1) % 4] for k in range(4))


def find_forbidden_rectangles(s: GameStructure) -> list[Rectangle]:
    require_two_players(s)
    return [r for r in rectangles(s) if is_forbidden_rectangle(s, r)]


def structure_fip_robust(s: GameStructure) -> bool:
    """No forbidden rectangle, i.e. every assignment of acyclic preferences yields FIP."""
    require_two_players(s)
    rows = s.matrix()
    n, m = s.strategy_counts
    for i0, i1 in combinations(range(n), 2):
        r0, r1 = rows[i0], rows[i1]
        for j0, j1 in combinations(range(m), 2):
            if r0[j0] != r1[j0] and r1[j0] != r1[j1] and r1[j1] != r0[j1] and r0[j1] != r0[j0]:
                return False
    return True


def plant_cycle(s: GameStructure, r: Rectangle) -> tuple[Preference, Preference]:
    """Linear preferences making the forbidden rectangle ``r`` an elementary cycle."""
    if not is_forbidden_rectangle(s, r):
        raise BadPath("rectangle is not forbidden; no elementary cycle can be planted")
    x, y, z, t = (s.outcome(p) for p in r.corners(s.player_count))
    n = len(s.outcomes)
    row_player = Preference(n, [(x, y), (z, t)])
    col_player = Preference(n, [(y, z), (t, x)])
    prefs = [None, None]
    prefs[r.players[0]] = linearize(row_player)
    prefs[r.players[1]] = linearize(col_player)
    return prefs[0], prefs[1]


# -- cross-validation of robustness -------------------------------------------------


@dataclass(frozen=True)
class RobustnessReport:
    """Rectangle scan against three dynamic conditions over many preference pairs.

    ``conditions`` maps each condition name to whether it held on every
    instantiation tried; ``witness`` is a preference pair with an elementary
    4-cycle, planted on the first forbidden rectangle when there is one.
    """

    robust: bool
    conditions: dict
    instantiations: int
    exhaustive: bool
    witness: tuple[Preference, Preference] | None
    disagreements: tuple[str, ...]

    @property
    def agree(self) -> bool:
        return not self.disagreements


def _win_lose(k: int):
    for bits in range(1 << k):
        wins = [x for x in range(k) if bits >> x & 1]
        loses = [x for x in range(k) if not bits >> x & 1]
        yield Preference(k, [(x, y) for x in loses for y in wins]), Preference(k, [(y, x) for x in loses for y in wins])


def _random_acyclic(rng, k: int) -> Preference:
    order = rng.sample(range(k), k)
    return Preference(k, [(order[i], order[j]) for i in range(k) for j in range(i + 1, k) if rng.random() < 0.5])


def check_theorem11(s: GameStructure, budget: int = 10_000, seed: int = 0) -> RobustnessReport:
    """Cross-check robustness of ``s`` against cycles, 4-cycles and NE-free subgames.

    Every win-lose instantiation is tried, then either every pair of acyclic
    preferences (when there are at most ``budget`` pairs) or ``budget`` random
    pairs drawn with ``seed``.  A disagreement raises ``AssertionError``.
    """
    import random

    from . import kernels
    from .enumerate import acyclic_relations

    require_two_players(s)
    n, m = s.strategy_counts
    k = len(s.outcomes)
    labels = list(s.cells)
    robust = structure_fip_robust(s)

    pairs = list(_win_lose(k))
    if not robust:
        witness = plant_cycle(s, find_forbidden_rectangles(s)[0])
        pairs.insert(0, witness)
    else:
        witness = None
    rels = acyclic_relations(k) if k <= 4 else None
    exhaustive = rels is not None and len(rels) ** 2 <= budget
    if exhaustive:
        pairs.extend((a, b) for a in rels for b in rels)
    else:
        rng = random.Random(seed)
        pairs.extend((_random_acyclic(rng, k), _random_acyclic(rng, k)) for _ in range(budget))

    cyc = four = empty = False
    for a, b in pairs:
        P0, P1 = a.masks, b.masks
        cyc = cyc or kernels.has_cycle(labels, n, m, P0, P1)
        four = four or kernels.has_four_cycle(labels, n, m, P0, P1)
        empty = empty or kernels.subgame_without_ne(labels, n, m, P0, P1)
        if cyc and four and empty:
            break

    conditions = {"no_four_cycle": not four, "no_cycle": not cyc, "subgames_have_ne": not empty}
    disagreements = tuple(name for name, held in conditions.items() if held != robust)
    report = RobustnessReport(robust, conditions, len(pairs), exhaustive, witness, disagreements)
    if disagreements:
        raise AssertionError(f"robustness conditions disagree: {disagreements}")
    return report


__all__ = [
    "FORBIDDEN",
    "RobustnessReport",
    "STRONG",
    "WEAK",
    "PatternKind",
    "PatternMatch",
    "SYMMETRIES",
    "Symmetry",
    "check_theorem11",
    "classify_rectangle",
    "find_forbidden_patterns",
    "find_forbidden_rectangles",
    "is_forbidden_rectangle",
    "kinds_of",
    "length_two_paths",
    "observation5_cover",
    "plant_cycle",
    "structure_fip_robust",
]


"""Catalogue of the small games and structures used throughout the tests.

Each fixture records its table, its preferences (payoff games use the
ordinary payoff order) and the verdicts it is expected to produce.  Row and
column numbers in ``expected`` are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import Game, GameStructure
from .errors import UnknownFixture
from .relations import Preference

E = (0, 0)


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    build: Callable[[], Game | GameStructure]
    expected: dict = field(default_factory=dict)

    def game(self) -> Game | GameStructure:
        return self.build()


def _payoff(rows):
    return lambda: Game.from_payoff_table(rows)


def _symbolic(rows, prefs=None, counts=None):
    """``prefs`` maps a player to a worst-to-best list of symbols."""

    def build():
        if counts is None:
            s = GameStructure.from_table(rows)
        else:
            s = GameStructure.from_labels(counts, rows)
        if prefs is None:
            return s
        ids = {lab: i for i, lab in enumerate(s.outcomes)}
        n = len(s.outcomes)
        return Game(
            s, tuple(Preference.from_order([ids[x] for x in order], n) for order in prefs)
        )

    return build


INTRO1 = [[(1, 0), (0, 3)], [(0, 1), (1, 2)]]
# normal form of the two-stage tree: b's strategies are (choice after L, choice after R)
INTRO2 = [[(1, 5), (1, 5), (4, 2), (4, 2)], [(8, 3), (6, 7), (8, 3), (6, 7)]]
INTRO3 = [[(2, 0), (0, 2), E], [(0, 2), (2, 0), E], [E, E, (3, 3)]]
INTRO4 = [[(2, 0), E, (0, 1)], [(0, 2), (2, 0), E], [E, E, (3, 3)]]
INTRO4_MOD = [[(2, 0), (0, 2), (0, 1)], [(0, 2), (2, 0), E], [E, E, (3, 3)]]

MP2 = [[(1, 0), (0, 1)], [(0, 1), (1, 0)]]
PUB6 = [[(1, 0), (0, 1), E], [E, (1, 0), (0, 1)], [(0, 1), E, (1, 0)]]
PUB1 = [[(2, 2), (0, 3), (2, 4)], [(2, 2), (1, 1), (0, 2)], [(1, 1), (1, 1), (1, 0)]]
PUC1 = [[(2, 2), (0, 3), (2, 2)], [(1, 1), (1, 1), (2, 2)], [(1, 1), (1, 1), (3, 0)]]
PUC2 = [
    [(2, 0), (0, 1), E, (2, 0)],
    [(1, 2), (1, 2), (0, 3), (1, 2)],
    [(1, 2), (1, 2), (1, 1), (2, 2)],
    [(1, 2), (1, 2), (1, 1), (3, 0)],
]
THREE_CYCLE = ((0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0))

POST1 = [[E, (1, 3)], [(1, 0), (0, 1)]]
POST2 = [[(1, 0), (0, 1), (0, 2)], [(0, 1), (1, 0), E]]
POST3 = [[(1, 0), (0, 1), E], [(0, 1), (1, 0), E], [E, E, (1, 1)]]
POST4 = [[E, E], [(1, 0), (0, 1)]]

XYZ_INDIFF = [["x", "y", "z"], ["z", "x", "y"], ["y", "z", "x"]]

# three players; the last one (c) picks the left or right array
TRI1_ARRAYS = ([["x", "z"], ["y", "y"]], [["t", "z"], ["t", "y"]])
TRI2_ARRAYS = ([["x", "x", "x"], ["x", "y", "y"]], [["z", "y", "z"], ["z", "y", "y"]])

INDFS_L = [["x", "x", "t"], ["x", "y", "y"], ["t", "z", "t"]]
INDFS_M = [["x", "x", "?"], ["x", "y", "y"], ["?", "z", "t"]]
FR_2X2 = [["x", "y"], ["y", "x"]]

_WA10_BAND = {
    (0, 0): (1, 3), (0, 1): (3, 1), (0, 7): (5, 1),
    (1, 5): (5, 1),
    (2, 5): (6, 4), (2, 6): (4, 6),
    (3, 5): (4, 6), (3, 6): (6, 4),
    (4, 7): (6, 4), (4, 8): (4, 6),
    (5, 7): (4, 6), (5, 8): (6, 4),
    (8, 9): (0, 3),
}


def _wa10_rows():
    rows = [[E] * 10 for _ in range(9)]
    for i in range(9):
        for j, val in ((i - 1, (2, 1)), (i, (1, 3)), (i + 1, (3, 1))):
            if 0 <= j < 10:
                rows[i][j] = val
    for (i, j), val in _WA10_BAND.items():
        rows[i][j] = val
    return rows


WA10 = _wa10_rows()
XYZ44 = [["x", "y", "z", "z"], ["y", "x", "z", "z"], ["z", "z", "x", "z"], ["z", "z", "z", "z"]]


def _tri(arrays):
    n, m = len(arrays[0]), len(arrays[0][0])
    labels = [arrays[c][i][j] for i in range(n) for j in range(m) for c in range(2)]
    return labels, (n, m, 2)


def _indifferent_xyz():
    s = GameStructure.from_table(XYZ_INDIFF)
    ids = {lab: i for i, lab in enumerate(s.outcomes)}
    x, y = ids["x"], ids["y"]
    return Game(s, (Preference(3, [(y, x)]), Preference(3, [(x, y)])))


_TRI1_LABELS, _TRI1_COUNTS = _tri(TRI1_ARRAYS)
_TRI2_LABELS, _TRI2_COUNTS = _tri(TRI2_ARRAYS)

FIXTURES: dict[str, Fixture] = {}


def _add(name, description, build, **expected):
    FIXTURES[name] = Fixture(name, description, build, expected)


_add("INTRO1", "2x2 game whose only NE (a2,b2) is there by chance", _payoff(INTRO1),
     nash=[(1, 1)])
_add("INTRO2", "normal form of the two-stage tree (b plans a reply to each a move)", _payoff(INTRO2))
_add("INTRO3", "3x3 game: NE bottom-right, improvement cycle in the upper-left 2x2", _payoff(INTRO3),
     fip=False, nash=[(2, 2)])
_add("INTRO4", "3x3 game with the finite improvement property", _payoff(INTRO4),
     fip=True, nash=[(2, 2)])
_add("INTRO4_MOD", "INTRO4 with its top (0,0) rewritten to (0,2): FIP lost", _payoff(INTRO4_MOD),
     fip=False)
_add("MP2", "matching pennies: a single elementary cycle", _payoff(MP2),
     fip=False, nash=[], forbidden={"EC": 1},
     cycle=((0, 0), (0, 1), (1, 1), (1, 0)))
_add("PUB6", "3x3 cycle with six PUB occurrences", _payoff(PUB6),
     fip=False, forbidden={"PUB": 6}, cycle=THREE_CYCLE)
_add("PUB1", "3x3 cycle with a single PUB at rows {1,3} x cols {1,3}", _payoff(PUB1),
     fip=False, forbidden={"PUB": 1}, forbidden_at=((0, 2), (0, 2)), cycle=THREE_CYCLE)
_add("PUC1", "3x3 cycle with a single PUC at rows {1,3} x cols {2,3}", _payoff(PUC1),
     fip=False, forbidden={"PUC": 1}, forbidden_at=((0, 2), (1, 2)), nash=[(2, 1)],
     cycle=THREE_CYCLE)
_add("PUC2", "4x4 staircase cycle with a single PUC at rows {2,4} x cols {3,4}", _payoff(PUC2),
     fip=False, forbidden={"PUC": 1}, forbidden_at=((1, 3), (2, 3)), nash=[(2, 1), (3, 1)],
     cycle=((0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0)))
_add("XYZ_INDIFF", "3x3 Latin square: cycle without forbidden pattern, z indifferent",
     _indifferent_xyz, fip=False, forbidden={})
_add("POST1", "2x2 PUB that is an exact potential game", _payoff(POST1),
     forbidden={"PUB": 1}, exact_potential=True)
_add("POST2", "2x3 game with an EC whose maximising improvement terminates", _payoff(POST2),
     max_acyclic=True)
_add("POST3", "3x3 game with an NE but a maximising sheath without NE", _payoff(POST3),
     nash=[(2, 2)])
_add("POST4", "2x2 game without forbidden pattern and without ordinal potential", _payoff(POST4),
     forbidden={}, ordinal_potential=False)
_add("TRI1", "2x2x2 structure: slices cycle-free, yet a 6-step three-player cycle",
     _symbolic(_TRI1_LABELS, [["z", "y", "x"], ["y", "t", "z"], ["x", "t", "y"]], _TRI1_COUNTS),
     cycle=((0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 0, 1), (1, 0, 0)))
_add("TRI2", "2x3x2 structure: 2x2x2 substructures cycle-free, yet a 7-step cycle",
     _symbolic(_TRI2_LABELS, [["z", "y", "x"], ["x", "y", "z"], ["z", "x", "y"]], _TRI2_COUNTS),
     cycle=((1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 1, 1), (0, 2, 1), (1, 2, 1), (1, 0, 1)))
_add("INDFS_L", "3x3 matrix meeting the staircase assertions but with a forbidden rectangle",
     _symbolic(INDFS_L), robust=False)
_add("INDFS_M", "3x3 partial matrix ('?' blanks) with a forbidden rectangle under any completion",
     _symbolic(INDFS_M), blanks=((0, 2), (2, 0)))
_add("FR_2x2", "the 2x2 forbidden rectangle x y / y x", _symbolic(FR_2X2), robust=False)
_add("WA10", "9x10 weakly acyclic game (blank = 0,0) with no weakly acyclic maximal subgame",
     _payoff(WA10), weakly_acyclic=True, nash=[(8, 9)])
_add("XYZ44", "4x4 structure; with z<a y<a x and z<b x<b y it traps improvement upper-left",
     _symbolic(XYZ44, [["z", "y", "x"], ["z", "x", "y"]]), weakly_acyclic=False)


def get(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise UnknownFixture(f"no fixture named {name!r}") from None


def load(name: str):
    return get(name).game()


def names() -> list[str]:
    return list(FIXTURES)

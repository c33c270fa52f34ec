"""Exhaustive sweeps over small games, used to validate the structural results.

Structures are enumerated up to relabeling of outcomes, permutation of rows
and columns, and transposition of square shapes.  This loses nothing because
every sweep ranges over all preferences of the relevant class for both
players, a set closed under relabeling and under exchanging the players.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from . import kernels
from .core import Game, GameStructure, rectangles
from .decomp import decompose_matrix, distinct_entries, row_col_cover, staircase_form
from .dynamics import IMPROVEMENT, MAXIMISING, max_improvement_sheath_ne
from .enumerate import acyclic_relations, linear_orders, rectangle_free_matrices, structure_orbits, weak_orders
from .patterns import classify_rectangle, length_two_paths, structure_fip_robust
from .relations import Preference
from .stochastic import check_observation18


@lru_cache(maxsize=None)
def _order_table(kind: str, k: int) -> tuple[tuple[Preference, ...], np.ndarray]:
    prefs = {"weak": weak_orders, "linear": linear_orders, "acyclic": acyclic_relations}[kind](k)
    return tuple(prefs), np.array([p.masks for p in prefs], dtype=np.uint32).reshape(len(prefs), k)


def _shapes(max_rows: int, max_cols: int):
    return [(n, m) for n in range(1, max_rows + 1) for m in range(1, max_cols + 1)]


@dataclass
class SweepReport:
    structures: int = 0
    games: int = 0
    failures: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def pattern_free_sweep(max_side: int = 3, max_labels: int = 4, pure: bool = False) -> tuple[SweepReport, SweepReport]:
    """Strict-weak-order games up to ``max_side`` x ``max_side``.

    First report: games without forbidden pattern whose improvement graph is
    cyclic.  Second report: strongly-forbidden-free games on which the sheath
    verdict is a counterexample (``extra["cyclic"]`` counts the games whose
    maximising graph is cyclic, i.e. where the verdict is not trivial).
    """
    cor, thm = SweepReport(), SweepReport()
    cyclic = 0
    for n, m in _shapes(max_side, max_side):
        for labels, _ in structure_orbits(n, m, max_labels):
            k = max(labels) + 1
            prefs, table = _order_table("weak", k)
            games, violations, candidates = kernels.sweep_orders(labels, n, m, table, pure=pure)
            for rep in (cor, thm):
                rep.structures += 1
                rep.games += games
            cor.failures.extend((n, m, labels, prefs[a].ranks(), prefs[b].ranks()) for a, b in violations)
            s = GameStructure.from_ids((n, m), labels)
            for a, b in candidates:
                cyclic += 1
                verdict = max_improvement_sheath_ne(Game(s, (prefs[a], prefs[b])), check_hypotheses=False)
                if verdict.kind == "counterexample":
                    thm.failures.append((n, m, labels, prefs[a].ranks(), prefs[b].ranks(), verdict.cycle))
    thm.extra["cyclic"] = cyclic
    return cor, thm


def robustness_sweep(max_side: int = 3, max_labels: int = 4, pure: bool = False) -> SweepReport:
    """Compare the rectangle scan with the three dynamic conditions under all acyclic preferences."""
    rep = SweepReport()
    robust = 0
    for n, m in _shapes(max_side, max_side):
        for labels, _ in structure_orbits(n, m, max_labels):
            k = max(labels) + 1
            prefs, table = _order_table("acyclic", k)
            free = structure_fip_robust(GameStructure.from_ids((n, m), labels))
            robust += free
            cyc, four, empty = kernels.structure_witnesses(labels, n, m, table, pure=pure)
            rep.structures += 1
            rep.games += len(prefs) ** 2
            verdicts = {"no_cycle": not cyc, "no_four_cycle": not four, "subgames_have_ne": not empty}
            if any(v != free for v in verdicts.values()):
                rep.failures.append((n, m, labels, free, verdicts))
    rep.extra["robust"] = robust
    return rep


def two_step_cover_sweep(values=(0, 1, 2)) -> SweepReport:
    """2x2 payoff games with both payoffs of each cell drawn from ``values``."""
    rep = SweepReport()
    vectors = list(product(values, repeat=2))
    with_path = 0
    for cells in product(vectors, repeat=4):
        g = Game.from_payoffs((2, 2), cells)
        rep.games += 1
        for r in rectangles(g.structure):
            if length_two_paths(g, r):
                with_path += 1
                if not classify_rectangle(g, r):
                    rep.failures.append(cells)
    rep.structures = rep.games
    rep.extra["with_path"] = with_path
    return rep


def removable_sweep(shapes=((2, 2), (2, 3)), pure: bool = False) -> SweepReport:
    """Linear-order games whose maximising improvement weakly terminates must have a removable strategy."""
    rep = SweepReport()
    terminating = 0
    for n, m in shapes:
        for labels, _ in structure_orbits(n, m, n * m):
            k = max(labels) + 1
            prefs, table = _order_table("linear", k)
            games, term, failures = kernels.sweep_removable(labels, n, m, table, pure=pure)
            rep.structures += 1
            rep.games += games
            terminating += term
            rep.failures.extend((n, m, labels, prefs[a].ranks(), prefs[b].ranks()) for a, b in failures)
    rep.extra["terminating"] = terminating
    return rep


def chain_equivalence_sweep(max_profiles: int = 6, max_labels: int = 3) -> SweepReport:
    """Two-player games with at most ``max_profiles`` profiles under all acyclic preference pairs, both chains."""
    rep = SweepReport()
    weakly = 0
    for n, m in _shapes(max_profiles, max_profiles):
        if n * m > max_profiles or n > m:
            continue
        for labels, _ in structure_orbits(n, m, max_labels):
            k = max(labels) + 1
            prefs, _ = _order_table("acyclic", k)
            s = GameStructure.from_ids((n, m), labels)
            rep.structures += 1
            for pa in prefs:
                for pb in prefs:
                    g = Game(s, (pa, pb))
                    for kind in (IMPROVEMENT, MAXIMISING):
                        rep.games += 1
                        v = check_observation18(g, kind)
                        weakly += v.weakly_terminating
                        if not v.holds:
                            rep.failures.append((n, m, labels, kind, pa.pairs, pb.pairs))
    rep.extra["weakly_terminating"] = weakly
    return rep


def decomposition_sweep(max_rows: int = 4, max_cols: int = 4, max_labels: int = 6, staircase: bool = False) -> SweepReport:
    """Every rectangle-free matrix up to the given shape, labels up to renaming.

    Checks that a row/column cover exists, that at most n + m distinct entries
    occur and that the stripe/corner decomposition replays to the matrix.  With
    ``staircase`` the staircase assertions are also checked for every entry.
    """
    rep = SweepReport()
    for n, m in _shapes(max_rows, max_cols):
        for labels in rectangle_free_matrices(n, m, max_labels):
            a = [list(labels[i * m:(i + 1) * m]) for i in range(n)]
            rep.structures += 1
            problems = []
            if row_col_cover(a) is None:
                problems.append("cover")
            if distinct_entries(a) > n + m:
                problems.append("bound")
            try:
                decompose_matrix(a)
            except Exception as exc:  # recorded, not raised: the sweep reports every failure
                problems.append(f"decompose: {exc}")
            if staircase:
                problems.extend(f"staircase {x}" for x in set(labels) if not staircase_form(a, x).holds)
            if problems:
                rep.failures.append((n, m, labels, problems))
    rep.games = rep.structures
    return rep

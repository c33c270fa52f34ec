"""Structure theory of matrices without forbidden rectangles.

Matrices are lists of rows of hashable entries (outcome ids or labels).
Everything here is two-player: ``decompose`` accepts a ``GameStructure`` and
rejects other player counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations, permutations, product
from typing import Hashable, Sequence, Union

from .core import GameStructure, require_two_players
from .errors import DecompositionFailed, ForbiddenRectanglePresent, XAbsent

Matrix = Sequence[Sequence[Hashable]]


def has_forbidden_rectangle(a: Matrix) -> bool:
    n = len(a)
    m = len(a[0]) if n else 0
    for i0, i1 in combinations(range(n), 2):
        r0, r1 = a[i0], a[i1]
        for j0, j1 in combinations(range(m), 2):
            if r0[j0] != r1[j0] and r1[j0] != r1[j1] and r1[j1] != r0[j1] and r0[j1] != r0[j0]:
                return True
    return False


def distinct_entries(a: Matrix) -> int:
    return len({v for row in a for v in row})


# -- staircase normal form ---------------------------------------------------------


@dataclass(frozen=True)
class StaircaseForm:
    """``b[i][j] = a[row_perm[i]][col_perm[j]]``; ``s[j]`` counts the x entries of column j of b.

    ``s`` and ``k`` are 1-based in the sense of the statement they check:
    ``s[j-1]`` is s(j), and ``k`` ranges over 0..m, with s(0) read as n.  ``assertions`` maps
    the five numbered assertions (plus ``"shape"`` for the staircase itself)
    to their truth value; ``k`` is None when no admissible k exists.
    """

    x: Hashable
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    s: tuple[int, ...]
    k: int | None
    b: tuple[tuple[Hashable, ...], ...]
    assertions: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.assertions.values())


def _containment_order(sets: list[frozenset[int]]) -> list[int]:
    """Indices sorted so that x-sets shrink; equal sets keep index order."""

    def cmp(p, q):
        if sets[p] == sets[q]:
            return p - q
        if sets[q] <= sets[p]:
            return -1
        if sets[p] <= sets[q]:
            return 1
        # incomparable sets only arise with a forbidden rectangle; fall back to size
        return len(sets[q]) - len(sets[p]) or p - q

    return sorted(range(len(sets)), key=cmp_to_key(cmp))


def staircase_form(a: Matrix, x: Hashable, check_hypothesis: bool = True) -> StaircaseForm:
    """Sort rows and columns by their x-sets and check the five staircase assertions.

    With ``check_hypothesis=False`` the forbidden-rectangle precondition is
    skipped, so matrices that merely happen to satisfy the assertions can be
    examined.
    """
    n, m = len(a), len(a[0])
    if not any(v == x for row in a for v in row):
        raise XAbsent(f"{x!r} does not occur in the matrix")
    if check_hypothesis and has_forbidden_rectangle(a):
        raise ForbiddenRectanglePresent("matrix has a forbidden rectangle")
    col_sets = [frozenset(i for i in range(n) if a[i][j] == x) for j in range(m)]
    row_sets = [frozenset(j for j in range(m) if a[i][j] == x) for i in range(n)]
    theta = _containment_order(col_sets)
    phi = _containment_order(row_sets)
    b = tuple(tuple(a[phi[i]][theta[j]] for j in range(m)) for i in range(n))
    s = tuple(sum(1 for i in range(n) if b[i][j] == x) for j in range(m))

    def S(j):  # 1-based column index; a virtual column 0 is all x
        return s[j - 1] if j else n

    def B(i, j):
        return b[i - 1][j - 1]

    shape = (
        all(s[j] >= s[j + 1] for j in range(m - 1))
        and S(1) >= 1
        and all((i <= S(j)) == (B(i, j) == x) for i in range(1, n + 1) for j in range(1, m + 1))
    )

    def cond3(k):
        return all(
            B(i, j) == B(i, jp)
            for j in range(1, k + 1)
            for jp in range(j, k + 1)
            for i in range(S(j) + 1, n + 1)
        )

    if cond3(m):
        k = m
    else:
        k = next((c for c in range(m - 1, -1, -1) if cond3(c) and S(c + 1) < S(c)), None)

    report = {"shape": shape}
    if k is None:
        for name in ("1", "2", "3", "4", "5"):
            report[name] = False
        return StaircaseForm(x, tuple(phi), tuple(theta), s, None, b, report)
    report["1"] = k == m or S(k + 1) < S(k)
    report["2"] = k == m or all(
        B(i, j) == B(ip, j)
        for j in range(1, m + 1)
        for i in range(S(j) + 1, S(k + 1) + 1)
        for ip in range(i, S(k + 1) + 1)
    )
    report["3"] = cond3(k)
    report["4"] = k == m or not has_forbidden_rectangle(
        [list(b[i][k:]) for i in range(S(k + 1), n)] or [[]]
    )
    report["5"] = k == m or all(
        B(i, j) in (B(i, k), B(S(k + 1), j))
        for i in range(S(k) + 1, n + 1)
        for j in range(1, m + 1)
        if S(j) < S(k + 1)
    )
    return StaircaseForm(x, tuple(phi), tuple(theta), s, k, b, report)


# -- row / column cover -------------------------------------------------------------


def row_col_cover(a: Matrix) -> tuple[tuple, tuple] | None:
    """Vectors y (per row) and z (per column) with every entry equal to y_i or z_j.

    Each y_i ranges over the entries of row i in order of first appearance,
    which loses nothing: a row whose y_i appears nowhere in it is covered by
    the columns alone, and any of its own entries can then serve as y_i.  Hence
    None means that no cover exists.
    """
    n, m = len(a), len(a[0])
    options = [list(dict.fromkeys(row)) for row in a]
    for ys in product(*options):
        zs = []
        for j in range(m):
            loose = {a[i][j] for i in range(n) if a[i][j] != ys[i]}
            if len(loose) > 1:
                break
            zs.append(loose.pop() if loose else a[0][j])
        else:
            return tuple(ys), tuple(zs)
    return None


# -- stripe / corner decomposition ---------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    values: tuple[tuple, ...]


@dataclass(frozen=True)
class Stripe:
    axis: str  # "row" or "col"
    index: int
    x: Hashable
    child: "Node"


@dataclass(frozen=True)
class Corner:
    rows: tuple[int, int, int]
    cols: tuple[int, int, int]
    x: Hashable
    y: Hashable
    z: Hashable
    row_margins: tuple[tuple, tuple, tuple]  # entries of the three anchor rows on the remaining columns
    col_margins: tuple[tuple, tuple, tuple]  # entries of the three anchor columns on the remaining rows
    child: "Node"


Node = Union[Leaf, Stripe, Corner]


@dataclass(frozen=True)
class DecompositionTree:
    root: Node
    shape: tuple[int, int]

    def depth(self) -> int:
        d, node = 0, self.root
        while not isinstance(node, Leaf):
            d += 1
            node = node.child
        return d

    def replay(self) -> list[list]:
        """Rebuild the matrix from the constructors, checking each one's side conditions."""
        n, m = self.shape
        out: list[list] = [[None] * m for _ in range(n)]
        _replay(self.root, tuple(range(n)), tuple(range(m)), out)
        if any(v is None for row in out for v in row):
            raise DecompositionFailed("replay left cells unfilled")
        return out

    def describe(self) -> list[str]:
        lines = []
        node, pad = self.root, ""
        while True:
            if isinstance(node, Leaf):
                lines.append(f"{pad}leaf rows={_indices(node.rows)} cols={_indices(node.cols)}")
                return lines
            if isinstance(node, Stripe):
                lines.append(f"{pad}stripe {node.axis} {node.index} x={node.x}")
            else:
                lines.append(
                    f"{pad}corner rows={_indices(node.rows)} cols={_indices(node.cols)} "
                    f"x={node.x} y={node.y} z={node.z}"
                )
            node, pad = node.child, pad + "  "


def _indices(idx):
    return ",".join(str(i) for i in idx) or "-"


_BLOCK = (("x", "x", "z"), ("x", "y", "y"), ("z", "y", "z"))
_MARGIN = (("x", "z"), ("x", "y"), ("y", "z"))


def _replay(node: Node, rows, cols, out) -> None:
    if isinstance(node, Leaf):
        if tuple(node.rows) != tuple(rows) or tuple(node.cols) != tuple(cols):
            raise DecompositionFailed("leaf does not cover the remaining block")
        if min(len(rows), len(cols)) > 1 and not (len(rows) == len(cols) == 2):
            raise DecompositionFailed("leaf larger than allowed")
        if rows and cols and has_forbidden_rectangle(node.values):
            raise DecompositionFailed("leaf has a forbidden rectangle")
        for i, r in enumerate(rows):
            for j, c in enumerate(cols):
                out[r][c] = node.values[i][j]
        return
    if isinstance(node, Stripe):
        if node.axis == "row":
            if node.index not in rows:
                raise DecompositionFailed("stripe row outside the block")
            for c in cols:
                out[node.index][c] = node.x
            rest = tuple(r for r in rows if r != node.index)
            _replay(node.child, rest, cols, out)
        else:
            if node.index not in cols:
                raise DecompositionFailed("stripe column outside the block")
            for r in rows:
                out[r][node.index] = node.x
            rest = tuple(c for c in cols if c != node.index)
            _replay(node.child, rows, rest, out)
        return
    names = {"x": node.x, "y": node.y, "z": node.z}
    if len(set(names.values())) != 3:
        raise DecompositionFailed("corner outcomes are not pairwise distinct")
    if not (set(node.rows) <= set(rows) and set(node.cols) <= set(cols)):
        raise DecompositionFailed("corner anchors outside the block")
    rest_r = tuple(r for r in rows if r not in node.rows)
    rest_c = tuple(c for c in cols if c not in node.cols)
    for a in range(3):
        for b in range(3):
            out[node.rows[a]][node.cols[b]] = names[_BLOCK[a][b]]
        allowed = {names[t] for t in _MARGIN[a]}
        if len(node.row_margins[a]) != len(rest_c) or len(node.col_margins[a]) != len(rest_r):
            raise DecompositionFailed("corner margins have the wrong length")
        for c, v in zip(rest_c, node.row_margins[a]):
            if v not in allowed:
                raise DecompositionFailed(f"row margin value {v!r} not in {sorted(map(str, allowed))}")
            out[node.rows[a]][c] = v
        for r, v in zip(rest_r, node.col_margins[a]):
            if v not in allowed:
                raise DecompositionFailed(f"column margin value {v!r} not in {sorted(map(str, allowed))}")
            out[r][node.cols[a]] = v
    _replay(node.child, rest_r, rest_c, out)


def _find_corner(a, rows, cols):
    for rt in permutations(rows, 3):
        for ct in permutations(cols, 3):
            x, y, z = a[rt[0]][ct[0]], a[rt[1]][ct[1]], a[rt[0]][ct[2]]
            names = {"x": x, "y": y, "z": z}
            if len({x, y, z}) != 3:
                continue
            if any(a[rt[i]][ct[j]] != names[_BLOCK[i][j]] for i in range(3) for j in range(3)):
                continue
            rest_r = [r for r in rows if r not in rt]
            rest_c = [c for c in cols if c not in ct]
            ok = True
            for t in range(3):
                allowed = {names[v] for v in _MARGIN[t]}
                if any(a[rt[t]][c] not in allowed for c in rest_c) or any(a[r][ct[t]] not in allowed for r in rest_r):
                    ok = False
                    break
            if ok:
                return rt, ct, (x, y, z), rest_r, rest_c
    return None


def _decompose(a, rows: tuple, cols: tuple) -> Node:
    if min(len(rows), len(cols)) <= 1 or (len(rows) == len(cols) == 2):
        return Leaf(rows, cols, tuple(tuple(a[r][c] for c in cols) for r in rows))
    for r in rows:
        vals = {a[r][c] for c in cols}
        if len(vals) == 1:
            return Stripe("row", r, vals.pop(), _decompose(a, tuple(q for q in rows if q != r), cols))
    for c in cols:
        vals = {a[r][c] for r in rows}
        if len(vals) == 1:
            return Stripe("col", c, vals.pop(), _decompose(a, rows, tuple(q for q in cols if q != c)))
    found = _find_corner(a, rows, cols)
    if found is None:
        raise DecompositionFailed(f"no stripe or corner on rows {rows} x cols {cols}")
    rt, ct, (x, y, z), rest_r, rest_c = found
    row_margins = tuple(tuple(a[rt[t]][c] for c in rest_c) for t in range(3))
    col_margins = tuple(tuple(a[r][ct[t]] for r in rest_r) for t in range(3))
    return Corner(rt, ct, x, y, z, row_margins, col_margins, _decompose(a, tuple(rest_r), tuple(rest_c)))


def decompose_matrix(a: Matrix) -> DecompositionTree:
    if has_forbidden_rectangle(a):
        raise ForbiddenRectanglePresent("matrix has a forbidden rectangle")
    n, m = len(a), len(a[0])
    tree = DecompositionTree(_decompose(a, tuple(range(n)), tuple(range(m))), (n, m))
    if tree.replay() != [list(row) for row in a]:
        raise DecompositionFailed("replay does not reproduce the matrix")
    return tree


def decompose(s: GameStructure) -> DecompositionTree:
    """Stripe/corner decomposition of a structure without forbidden rectangles, verified by replay."""
    require_two_players(s)
    return decompose_matrix(s.matrix())

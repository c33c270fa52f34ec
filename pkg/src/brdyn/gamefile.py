"""Plain-text game files.

Grammar (``#`` starts a comment; blank lines are ignored)::

    file      = header "outcomes" NL row{n1} [symbols] pref*
    header    = "players" INT NL  "strategies" INT{players} NL  "mode" ("symbolic"|"payoff") NL
    row       = cell{n2 * ... * nN} NL            # player-0 major, player 1 slowest among the rest
    cell      = SYMBOL | RATIONAL ("," RATIONAL){players-1} | "."
    symbols   = "symbols" SYMBOL+ NL             # optional outcome-table order (symbolic only)
    pref      = "pref" INT ":" [SYMBOL ("<" SYMBOL)*] NL

``.`` is the all-zero payoff vector.  Preference lines are allowed only in
symbolic mode; ``pref p:`` with no pairs declares an empty relation.  A
symbolic file without preference lines is a bare structure.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import prod

from .core import PAYOFF, SYMBOLIC, Game, GameStructure, payoff_preferences
from .errors import ArityMismatch, GameError, ParseError, UnknownOutcome
from .relations import Preference

_SYMBOL = re.compile(r"[^\s#<:,]+")
_NUMBER = r"[-+]?\d+(?:\.\d+)?(?:/\d+)?"
_VECTOR = re.compile(rf"{_NUMBER}(?:,{_NUMBER})*")


def _tokens(line: str):
    """(column, token) pairs, 1-based columns."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


class _Lines:
    def __init__(self, text: str):
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].rstrip()
            if line.strip():
                self.items.append((no, line))
        self.pos = 0
        self.last = len(text.splitlines())

    def next(self, what: str):
        if self.pos >= len(self.items):
            raise ParseError(f"expected {what}, got end of file", self.last + 1, 1)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def done(self) -> bool:
        return self.pos >= len(self.items)


def _int(tok, no, col, what):
    if not re.fullmatch(r"\d+", tok):
        raise ParseError(f"{what} must be a non-negative integer, got {tok!r}", no, col)
    return int(tok)


def _keyword(lines: _Lines, key: str):
    no, line = lines.next(f"'{key}'")
    toks = _tokens(line)
    if toks[0][1] != key:
        raise ParseError(f"expected '{key}', got {toks[0][1]!r}", no, toks[0][0])
    return no, toks[1:]


def parse(text: str) -> Game | GameStructure:
    lines = _Lines(text)
    no, args = _keyword(lines, "players")
    if len(args) != 1:
        raise ParseError("'players' takes one integer", no, 1)
    players = _int(args[0][1], no, args[0][0], "player count")
    if players < 1:
        raise ParseError("need at least one player", no, args[0][0])

    no, args = _keyword(lines, "strategies")
    if len(args) != players:
        raise ArityMismatch(f"'strategies' needs {players} counts, got {len(args)}", no, 1)
    counts = tuple(_int(t, no, c, "strategy count") for c, t in args)
    for c, t in args:
        if int(t) < 1:
            raise ParseError("strategy counts must be positive", no, c)

    no, args = _keyword(lines, "mode")
    if len(args) != 1 or args[0][1] not in (SYMBOLIC, PAYOFF):
        raise ParseError("mode must be 'symbolic' or 'payoff'", no, args[0][0] if args else 1)
    mode = args[0][1]

    no, args = _keyword(lines, "outcomes")
    if args:
        raise ParseError("'outcomes' takes no arguments", no, args[0][0])
    width = prod(counts[1:])
    labels = []
    for _ in range(counts[0]):
        no, line = lines.next("an outcome row")
        toks = _tokens(line)
        if toks[0][1] in ("pref", "symbols"):
            raise ArityMismatch(f"expected {counts[0]} outcome rows", no, 1)
        if len(toks) != width:
            raise ArityMismatch(f"row has {len(toks)} cells, expected {width}", no, 1)
        for col, tok in toks:
            labels.append(_cell(tok, mode, players, no, col))

    table_order = None
    prefs: dict[int, list[tuple[str, str]]] = {}
    while not lines.done():
        no, line = lines.next("a preference line")
        toks = _tokens(line)
        head = toks[0][1]
        if head == "symbols":
            if mode != SYMBOLIC or table_order is not None or prefs:
                raise ParseError("'symbols' is allowed once, before preferences, in symbolic mode", no, 1)
            table_order = [t for _, t in toks[1:]]
            for c, t in toks[1:]:
                if not _SYMBOL.fullmatch(t) or t == ".":
                    raise ParseError(f"bad symbol {t!r}", no, c)
            if len(set(table_order)) != len(table_order):
                raise ParseError("repeated symbol in 'symbols'", no, 1)
            continue
        if head != "pref":
            raise ParseError(f"unexpected {head!r} after the outcome rows", no, toks[0][0])
        if mode != SYMBOLIC:
            raise ParseError("preference lines are only allowed in symbolic mode", no, 1)
        player, pairs = _pref_line(line, no, players)
        prefs.setdefault(player, []).extend(pairs)

    if mode == PAYOFF:
        s = GameStructure.from_labels(counts, labels)
        return Game(s, payoff_preferences(s))

    if table_order is None:
        table_order = list(dict.fromkeys(labels))
    ids = {lab: i for i, lab in enumerate(table_order)}
    for lab in labels:
        if lab not in ids:
            raise UnknownOutcome(f"cell symbol {lab!r} missing from 'symbols'")
    s = GameStructure(counts, tuple(ids[lab] for lab in labels), tuple(table_order))
    if not prefs:
        return s
    out = []
    for p in range(players):
        pairs = []
        for (x, y), (no, col) in prefs.get(p, []):
            for name in (x, y):
                if name not in ids:
                    raise UnknownOutcome(f"outcome {name!r} does not occur", no, col)
            if x == y:
                raise ParseError(f"reflexive pair {x} < {x}", no, col)
            pairs.append((ids[x], ids[y]))
        out.append(Preference(len(table_order), pairs))
    return Game(s, tuple(out))


def _cell(tok, mode, players, no, col):
    if mode == PAYOFF:
        if tok == ".":
            return (Fraction(0),) * players
        if not _VECTOR.fullmatch(tok):
            raise ParseError(f"bad payoff cell {tok!r}", no, col)
        parts = tok.split(",")
        if len(parts) != players:
            raise ArityMismatch(f"payoff cell {tok!r} has {len(parts)} entries, expected {players}", no, col)
        return tuple(Fraction(x) for x in parts)
    if tok == "." or not _SYMBOL.fullmatch(tok):
        raise ParseError(f"bad symbol {tok!r}", no, col)
    return tok


def _pref_line(line, no, players):
    m = re.fullmatch(r"\s*pref\s+(\S+?)\s*:(.*)", line)
    if not m:
        raise ParseError("expected 'pref <player>: x < y ...'", no, 1)
    player = _int(m.group(1), no, line.index(m.group(1)) + 1, "player")
    if player >= players:
        raise ParseError(f"player {player} out of range", no, line.index(m.group(1)) + 1)
    body, offset = m.group(2), m.start(2)
    if not body.strip():
        return player, []
    names = []
    for part in re.finditer(r"[^<]+", body):
        name = part.group().strip()
        col = offset + part.start() + len(part.group()) - len(part.group().lstrip()) + 1
        if not _SYMBOL.fullmatch(name or "?") or not name:
            raise ParseError(f"bad outcome name {name!r}", no, col)
        names.append((name, col))
    if body.count("<") != len(names) - 1 or len(names) < 2:
        raise ParseError("a preference chain needs at least two outcomes separated by '<'", no, offset + 1)
    return player, [((a, b), (no, cb)) for (a, _), (b, cb) in zip(names, names[1:])]


# -- serialisation -----------------------------------------------------------------


def _fmt_vector(v) -> str:
    if all(x == 0 for x in v):
        return "."
    return ",".join(str(x) for x in v)


def serialize(obj: Game | GameStructure) -> str:
    """Canonical text; ``parse(serialize(g)) == g`` for canonical games."""
    game = obj if isinstance(obj, Game) else None
    s = obj.structure if game else obj
    counts = s.strategy_counts
    width = prod(counts[1:])
    lines = [f"players {s.player_count}", "strategies " + " ".join(map(str, counts)), f"mode {s.mode}", "outcomes"]
    cells = [s.outcomes[o] for o in s.cells]
    fmt = _fmt_vector if s.mode == PAYOFF else str
    texts = [fmt(c) for c in cells]
    colw = max(len(t) for t in texts)
    for i in range(counts[0]):
        row = texts[i * width:(i + 1) * width]
        lines.append(" ".join(t.ljust(colw) for t in row).rstrip())
    if s.mode == SYMBOLIC:
        if list(s.outcomes) != list(dict.fromkeys(cells)):
            lines.append("symbols " + " ".join(s.outcomes))
        if game is not None:
            for p, pref in enumerate(game.preferences):
                pairs = sorted(pref.pairs)
                if not pairs:
                    lines.append(f"pref {p}:")
                for x, y in pairs:
                    lines.append(f"pref {p}: {s.outcomes[x]} < {s.outcomes[y]}")
    elif game is not None and game.preferences != payoff_preferences(s):
        raise GameError("payoff games with non-payoff preferences have no text form")
    return "\n".join(lines) + "\n"

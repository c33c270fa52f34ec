"""Command line front end.

Every command reads a game (a file path, ``-`` for stdin, or
``fixtures:NAME``), prints a human-readable report and ends with one machine
line ``RESULT key=value ...``.  Failures print ``ERROR <code> <message>``.

Exit codes: 0 success, 2 unreadable input or bad usage, 3 a hypothesis of
the requested analysis fails, 4 an internal assertion fails (a bug).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import fixtures
from .core import Game, GameStructure, format_outcome
from .decomp import decompose_matrix, distinct_entries
from .dynamics import (
    IMPROVEMENT,
    MAXIMISING,
    check_lemma7,
    check_lemma9,
    exact_potential,
    has_fip,
    is_weakly_acyclic,
    nash_equilibria,
    ordinal_potential_exists,
)
from .errors import DecompositionFailed, GameError, ParseError, TwoPlayerOnly, UnknownFixture
from .gamefile import parse, serialize
from .patterns import find_forbidden_patterns, find_forbidden_rectangles
from .quotient import BlockPartition, derived_game, epsilon_nash, epsilon_terminates
from .stochastic import build_chain, check_observation18, recurrent_profiles, simulate

EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_BUG = 2, 3, 4


class UsageError(GameError):
    code = "usage"


class InternalCheckFailed(GameError):
    code = "internal"


def _result(**kv) -> str:
    return "RESULT " + " ".join(f"{k}={_value(v)}" for k, v in kv.items())


def _value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return "_".join(str(v).split())


def _profiles(ps) -> str:
    return ";".join(",".join(map(str, p)) for p in ps) or "-"


def load_game(spec: str) -> Game | GameStructure:
    if spec.startswith("fixtures:"):
        return fixtures.load(spec.split(":", 1)[1])
    if spec == "-":
        return parse(sys.stdin.read())
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc.strerror}") from None
    return parse(text)


def _need_game(obj) -> Game:
    if isinstance(obj, Game):
        return obj
    raise UsageError("this command needs preferences; the file only describes a structure")


def _structure(obj) -> GameStructure:
    return obj.structure if isinstance(obj, Game) else obj


def _labels(s: GameStructure) -> list[list[str]]:
    return [[format_outcome(s.outcomes[o]) for o in row] for row in s.matrix()]


def _path(g: Game, text: str):
    st = g.structure
    try:
        idx = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"--path expects comma-separated profile indices, got {text!r}") from None
    for i in idx:
        if not 0 <= i < st.size:
            raise UsageError(f"profile index {i} out of range 0..{st.size - 1}")
    return [st.profile(i) for i in idx]


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def read_partition(text: str, counts: Sequence[int]) -> BlockPartition:
    """Lines ``<player>: 0 1 | 2 3``; players without a line keep singleton blocks."""
    blocks = {p: tuple((s,) for s in range(c)) for p, c in enumerate(counts)}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep or not head.strip().isdigit():
            raise ParseError("expected '<player>: s s | s ...'", no, 1)
        p = int(head)
        if p >= len(counts):
            raise ParseError(f"player {p} out of range", no, 1)
        try:
            blocks[p] = tuple(tuple(int(t) for t in part.split()) for part in body.split("|"))
        except ValueError:
            raise ParseError("block members must be integers", no, len(head) + 2) from None
    part = BlockPartition(tuple(blocks[p] for p in range(len(counts))))
    part.check(counts)
    return part


# -- commands -------------------------------------------------------------------------


def cmd_fip(args, out):
    g = _need_game(load_game(args.game))
    kind = MAXIMISING if args.maximising else IMPROVEMENT
    v = has_fip(g, kind)
    if v.fip:
        print(f"{kind} graph is acyclic", file=out)
        print(_result(fip=True), file=out)
    else:
        print(f"{kind} cycle: {' -> '.join(map(str, v.cycle))}", file=out)
        print(_result(fip=False, cycle=_profiles(v.cycle)), file=out)


def cmd_weak(args, out):
    g = _need_game(load_game(args.game))
    kind = MAXIMISING if args.maximising else IMPROVEMENT
    v = is_weakly_acyclic(g, kind)
    if v.weakly_acyclic:
        print(f"every profile reaches an NE under {kind}", file=out)
        extra = {"max_distance": v.max_distance} if args.max else {}
        print(_result(weakly_acyclic=True, **extra), file=out)
    else:
        print(f"no NE reachable from {v.trapped} under {kind}", file=out)
        print(_result(weakly_acyclic=False, trapped=_profiles([v.trapped])), file=out)


def cmd_ne(args, out):
    g = _need_game(load_game(args.game))
    nes = sorted(nash_equilibria(g))
    for p in nes:
        print(f"NE {p}", file=out)
    print(_result(ne=len(nes), profiles=_profiles(nes)), file=out)


def cmd_patterns(args, out):
    g = _need_game(load_game(args.game))
    found = find_forbidden_patterns(g, strong=args.strong)
    for m in found:
        r = m.rectangle
        print(f"{m.kind.name} rows={r.rows} cols={r.cols} symmetry={m.symmetry.code}", file=out)
    kinds = ",".join(sorted({m.kind.name for m in found})) or "-"
    print(_result(forbidden=len(found), kinds=kinds), file=out)


def cmd_rect(args, out):
    s = _structure(load_game(args.game))
    found = find_forbidden_rectangles(s)
    for r in found:
        print(f"forbidden rectangle players={r.players} rows={r.rows} cols={r.cols} context={r.context}", file=out)
    extra = {}
    if s.player_count == 2:
        extra["distinct"] = distinct_entries(s.matrix())
    print(_result(forbidden_rectangles=len(found), robust=not found, **extra), file=out)


def cmd_decompose(args, out):
    s = _structure(load_game(args.game))
    if s.player_count != 2:
        raise TwoPlayerOnly("decomposition needs exactly two players")
    tree = decompose_matrix(_labels(s))
    if args.emit_tree:
        for line in tree.describe():
            print(line, file=out)
    print(_result(decomposable=True, depth=tree.depth()), file=out)


def cmd_markov(args, out):
    g = _need_game(load_game(args.game))
    kind = MAXIMISING if args.maximising else IMPROVEMENT
    chain = build_chain(g, kind, args.lam)
    rec = sorted(recurrent_profiles(chain))
    verdict = check_observation18(g, kind)
    if not verdict.holds:
        raise InternalCheckFailed("weak termination and recurrence disagree")
    print(f"recurrent profiles: {_profiles(rec)}", file=out)
    fields = dict(recurrent=_profiles(rec), recurrent_are_ne=verdict.recurrent_are_ne,
                  weakly_terminating=verdict.weakly_terminating)
    if args.simulate:
        seed, steps = args.simulate
        start = g.structure.profile(args.start)
        trace = simulate(chain, start, seed, steps)
        out.write(trace.export())
        fields.update(absorbed=trace.absorbed, steps=trace.steps, final=_profiles([trace.profiles[-1]]))
    print(_result(**fields), file=out)


def cmd_potential(args, out):
    g = _need_game(load_game(args.game))
    fields = {}
    if not args.ordinal:
        pot = exact_potential(g)
        if pot is not None:
            for p, v in sorted(pot.items()):
                print(f"P{p} = {v}", file=out)
        fields["exact"] = pot is not None
    if not args.exact:
        fields["ordinal"] = ordinal_potential_exists(g)
    print(_result(**fields), file=out)


def cmd_epsilon(args, out):
    g = _need_game(load_game(args.game))
    nes = sorted(epsilon_nash(g, args.eps))
    print(f"eps-NE: {_profiles(nes)}", file=out)
    fields = dict(eps=args.eps, eps_ne=len(nes))
    if args.eps > 0:
        fields["terminates"] = epsilon_terminates(g, args.eps).terminates
    if args.partition:
        try:
            with open(args.partition, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.partition}: {exc.strerror}") from None
        part = read_partition(text, g.strategy_counts)
        d = derived_game(g, part, args.eps)
        if not d.holds:
            raise InternalCheckFailed("derived game check failed")
        print(serialize(d.game), end="", file=out)
        fields.update(quotient_steps=d.steps_matched, quotient_gap=d.uniform_gap,
                      quotient_pattern_free=d.pattern_free_preserved)
    print(_result(**fields), file=out)


def cmd_path_check(args, out):
    g = _need_game(load_game(args.game))
    path = _path(g, args.path)
    check = check_lemma7 if args.command == "lemma7" else check_lemma9
    v = check(g, path)
    if v.status == "counterexample":
        raise InternalCheckFailed(f"{args.command} conclusion fails: {v.detail}")
    if v.failed:
        print(f"hypothesis failed: {v.failed} {v.detail}".rstrip(), file=out)
    print(_result(status=v.status, failed=v.failed), file=out)


def cmd_fixtures(args, out):
    if args.action == "list":
        for name in fixtures.names():
            print(name, file=out)
        print(_result(fixtures=len(fixtures.names())), file=out)
        return
    if not args.name:
        raise UsageError("fixtures dump needs a fixture name")
    fx = fixtures.get(args.name)
    print(f"# {fx.name}: {fx.description}", file=out)
    print(serialize(fx.game()), end="", file=out)


# -- argument parsing ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="brdyn", description="Better-response dynamics of finite games.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def game_cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("game", help="game file, '-' for stdin, or fixtures:NAME")
        p.set_defaults(func=func)
        return p

    p = game_cmd("fip", cmd_fip, "finite improvement property")
    p.add_argument("--maximising", action="store_true", help="use maximising improvement")
    p = game_cmd("weak", cmd_weak, "weak acyclicity")
    p.add_argument("--max", action="store_true", help="report the largest distance to an NE")
    p.add_argument("--maximising", action="store_true", help="use maximising improvement")
    game_cmd("ne", cmd_ne, "Nash equilibria")
    p = game_cmd("patterns", cmd_patterns, "forbidden patterns")
    p.add_argument("--strong", action="store_true", help="only the strongly forbidden kinds")
    game_cmd("rect", cmd_rect, "forbidden rectangles of the structure")
    p = game_cmd("decompose", cmd_decompose, "stripe/corner decomposition")
    p.add_argument("--emit-tree", action="store_true", help="print the decomposition tree")
    p = game_cmd("markov", cmd_markov, "associated Markov chain")
    p.add_argument("--lambda", dest="lam", type=_rational, default=Fraction(1, 2), help="self-loop weight")
    p.add_argument("--maximising", action="store_true", help="use maximising improvement")
    p.add_argument("--simulate", nargs=2, type=int, metavar=("SEED", "STEPS"), help="simulate one run")
    p.add_argument("--start", type=int, default=0, help="start profile index for --simulate")
    p = game_cmd("potential", cmd_potential, "exact and ordinal potentials")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--exact", action="store_true")
    grp.add_argument("--ordinal", action="store_true")
    p = game_cmd("epsilon", cmd_epsilon, "eps-equilibria and the block quotient")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--partition", help="block partition file")
    for name in ("lemma7", "lemma9"):
        p = game_cmd(name, cmd_path_check, f"hypothesis-gated {name} check")
        p.add_argument("--path", required=True, help="comma-separated flat profile indices")
    p = sub.add_parser("fixtures", help="list or print built-in fixtures")
    p.add_argument("action", choices=("list", "dump"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_fixtures)
    return ap


def exit_code(exc: Exception) -> int:
    if isinstance(exc, (ParseError, UnknownFixture, UsageError)):
        return EXIT_USAGE
    if isinstance(exc, (DecompositionFailed, InternalCheckFailed, AssertionError)):
        return EXIT_BUG
    return EXIT_HYPOTHESIS


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except (GameError, AssertionError) as exc:
        code = getattr(exc, "code", "internal")
        print(f"ERROR {code} {exc}", file=out)
        return exit_code(exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())

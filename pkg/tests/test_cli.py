import io
import subprocess
import sys

import networkx as nx
import pytest

from brdyn import cli, fixtures
from brdyn.core import Game
from brdyn.dynamics import has_fip, nash_equilibria
from brdyn.gamefile import serialize
from brdyn.patterns import find_forbidden_patterns

import oracles

GAMES = [n for n in fixtures.names() if isinstance(fixtures.load(n), Game)]


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), buf)
    return code, buf.getvalue()


def result(text):
    last = text.splitlines()[-1]
    assert last.startswith("RESULT ")
    return dict(kv.split("=", 1) for kv in last.split()[1:])


def test_fip_intro4():
    code, out = run("fip", "fixtures:INTRO4")
    assert code == 0 and out.splitlines()[-1] == "RESULT fip=true"


def test_fip_cycle_reported():
    code, out = run("fip", "fixtures:MP2")
    r = result(out)
    assert code == 0 and r["fip"] == "false"
    cyc = [tuple(map(int, p.split(","))) for p in r["cycle"].split(";")]
    graph = oracles.improvement_digraph(fixtures.load("MP2"))
    assert all(graph.has_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))


def test_patterns_pub6():
    code, out = run("patterns", "fixtures:PUB6")
    assert code == 0 and out.splitlines()[-1] == "RESULT forbidden=6 kinds=PUB"


def test_weak_wa10_max_matches_bfs():
    code, out = run("weak", "fixtures:WA10", "--max")
    g = fixtures.load("WA10")
    graph = oracles.improvement_digraph(g)
    dist = oracles.shortest_distances_to(graph, oracles.nash(g))
    assert code == 0
    assert result(out) == {"weakly_acyclic": "true", "max_distance": str(max(dist.values()))}


def test_weak_xyz44_trapped():
    code, out = run("weak", "fixtures:XYZ44")
    r = result(out)
    assert code == 0 and r["weakly_acyclic"] == "false"
    trapped = tuple(map(int, r["trapped"].split(",")))
    g = fixtures.load("XYZ44")
    reach = nx.descendants(oracles.improvement_digraph(g), trapped) | {trapped}
    assert not reach & oracles.nash(g)


@pytest.mark.parametrize("name", GAMES)
def test_cli_matches_library(name):
    g = fixtures.load(name)
    _, out = run("ne", f"fixtures:{name}")
    nes = sorted(nash_equilibria(g))
    assert result(out)["ne"] == str(len(nes))
    _, out = run("fip", f"fixtures:{name}")
    assert result(out)["fip"] == ("true" if has_fip(g) else "false")
    if g.player_count == 2:
        _, out = run("patterns", f"fixtures:{name}")
        assert result(out)["forbidden"] == str(len(find_forbidden_patterns(g)))


def test_rect_and_decompose():
    code, out = run("rect", "fixtures:FR_2x2")
    assert code == 0 and result(out) == {"forbidden_rectangles": "1", "robust": "false", "distinct": "2"}
    code, out = run("decompose", "fixtures:FR_2x2")
    assert code == 3 and out.startswith("ERROR forbidden_rectangle_present")


def test_decompose_tree(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("players 2\nstrategies 3 3\nmode symbolic\noutcomes\nx x z\nx y y\nz y z\n")
    code, out = run("decompose", str(f), "--emit-tree")
    assert code == 0
    assert out.splitlines()[0] == "corner rows=0,1,2 cols=0,1,2 x=x y=y z=z"
    assert result(out)["decomposable"] == "true"


def test_markov_trace():
    code, out = run("markov", "fixtures:MP2", "--simulate", "3", "4")
    lines = out.splitlines()
    assert code == 0
    assert lines[1] == "# seed=3 lambda=1/2"
    r = result(out)
    assert r["recurrent"] == "0,0;0,1;1,0;1,1" and r["absorbed"] == "false" and r["steps"] == "4"
    assert run("markov", "fixtures:MP2", "--simulate", "3", "4")[1] == out


def test_markov_wa10():
    code, out = run("markov", "fixtures:WA10", "--lambda", "1/3")
    r = result(out)
    assert code == 0 and r["recurrent"] == "8,9" and r["recurrent_are_ne"] == "true"


def test_potential():
    _, out = run("potential", "fixtures:POST1")
    assert result(out) == {"exact": "true", "ordinal": "true"}
    _, out = run("potential", "fixtures:POST4", "--ordinal")
    assert result(out) == {"ordinal": "false"}
    _, out = run("potential", "fixtures:MP2", "--exact")
    assert result(out) == {"exact": "false"}


def test_epsilon_with_partition(tmp_path):
    g = Game.from_payoff_table([[(0, 0), (0, 0), (0, 3)], [(0, 0), (0, 0), (0, 3)], [(3, 0), (3, 0), (3, 3)]])
    gf = tmp_path / "g.txt"
    gf.write_text(serialize(g))
    pf = tmp_path / "p.txt"
    pf.write_text("0: 0 1 | 2\n1: 0 1 | 2  # columns\n")
    code, out = run("epsilon", str(gf), "--eps", "1", "--partition", str(pf))
    assert code == 0
    r = result(out)
    assert r["eps_ne"] == "1" and r["terminates"] == "true"
    assert r["quotient_steps"] == r["quotient_gap"] == r["quotient_pattern_free"] == "true"
    assert "strategies 2 2" in out


def test_epsilon_coarse_partition(tmp_path):
    pf = tmp_path / "p.txt"
    pf.write_text("0: 0 1\n")
    code, out = run("epsilon", "fixtures:MP2", "--eps", "1", "--partition", str(pf))
    assert code == 3 and out.splitlines()[-1].startswith("ERROR partition_too_coarse")


def test_epsilon_zero():
    _, out = run("epsilon", "fixtures:MP2", "--eps", "0")
    assert result(out) == {"eps": "0", "eps_ne": "0"}


def test_path_check_commands():
    code, out = run("lemma7", "fixtures:MP2", "--path", "0,1,3,2,0,1")
    assert code == 0 and result(out) == {"status": "hypothesis_failed", "failed": "distinct"}
    code, out = run("lemma9", "fixtures:MP2", "--path", "0,1,3,2,0")
    assert code == 0 and result(out)["failed"] == "strongly_forbidden_pattern"
    code, out = run("lemma9", "fixtures:MP2", "--path", "0,9")
    assert code == 2


def test_counterexample_exits_4(monkeypatch):
    def boom(*a, **k):
        raise AssertionError("forced")

    monkeypatch.setattr(cli, "check_lemma9", boom)
    code, out = run("lemma9", "fixtures:MP2", "--path", "0,1,3,2,0")
    assert code == 4 and out.startswith("ERROR internal")


@pytest.mark.parametrize(
    "argv, code",
    [
        (["fip", "fixtures:NOPE"], 2),
        (["fip", "/nonexistent/file"], 2),
        (["fip"], 2),
        (["bogus"], 2),
        (["fip", "fixtures:INDFS_L"], 2),
        (["markov", "fixtures:MP2", "--lambda", "abc"], 2),
        (["markov", "fixtures:MP2", "--lambda", "1"], 3),
        (["rect", "fixtures:TRI1"], 3),
        (["epsilon", "fixtures:XYZ_INDIFF", "--eps", "1"], 3),
        (["fixtures", "dump"], 2),
    ],
)
def test_exit_codes(argv, code):
    got, out = run(*argv)
    assert got == code
    assert out.splitlines()[-1].startswith("ERROR ")


def test_parse_error_exit(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("players 2\nstrategies 2 2\nmode payoff\noutcomes\n1,0 0,1\n0,1\n")
    code, out = run("ne", str(f))
    assert code == 2 and "line 6" in out.splitlines()[-1]


def test_stdin_and_console_script():
    text = serialize(fixtures.load("INTRO4"))
    proc = subprocess.run([sys.executable, "-m", "brdyn.cli", "fip", "-"], input=text,
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.splitlines()[-1] == "RESULT fip=true"
    proc = subprocess.run([sys.executable, "-m", "brdyn.cli", "fip", "fixtures:NOPE"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2

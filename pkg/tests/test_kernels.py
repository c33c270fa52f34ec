import os
import random
import subprocess
import sys

import numpy as np
import pytest

from brdyn import fixtures, kernels
from brdyn.core import Game, GameStructure
from brdyn.enumerate import acyclic_relations, weak_orders
from brdyn.relations import Preference
from brdyn.stochastic import build_chain

import oracles

compiled = pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled extension not built")


def _random_instance(rng, max_side=4, k=4):
    n, m = rng.randint(1, max_side), rng.randint(1, max_side)
    labels = [rng.randrange(k) for _ in range(n * m)]
    prefs = []
    for _ in range(2):
        pairs = [(x, y) for x in range(k) for y in range(k) if x != y and rng.random() < 0.3]
        prefs.append(Preference(k, pairs))
    return n, m, labels, prefs


def _game(n, m, labels, prefs):
    k = prefs[0].outcome_count
    return Game(GameStructure.from_ids((n, m), labels, k), tuple(prefs))


def _flags_oracle(g):
    bits = 0
    for name, _, _ in oracles.forbidden_occurrences(g):
        bits |= {"EC": kernels.EC_BIT, "PUB": kernels.PUB_BIT, "PUC": kernels.PUC_BIT}[name]
    return bits


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "pure")


@pytest.mark.parametrize("pure", [True, pytest.param(False, marks=compiled)])
def test_graph_kernels_match_oracles(pure):
    rng = random.Random(1)
    for _ in range(300):
        n, m, labels, prefs = _random_instance(rng)
        g = _game(n, m, labels, prefs)
        P0, P1 = (p.masks for p in prefs)
        assert kernels.pattern_flags(labels, n, m, P0, P1, pure=pure) == _flags_oracle(g)
        imp, mx = oracles.improvement_digraph(g), oracles.maximising_digraph(g)
        assert kernels.has_cycle(labels, n, m, P0, P1, pure=pure) == (not oracles.acyclic(imp))
        assert kernels.has_cycle(labels, n, m, P0, P1, True, pure=pure) == (not oracles.acyclic(mx))
        assert kernels.weakly_terminating(labels, n, m, P0, P1, pure=pure) == oracles.weakly_acyclic(imp)
        assert kernels.weakly_terminating(labels, n, m, P0, P1, True, pure=pure) == oracles.weakly_acyclic(mx)
        assert kernels.has_four_cycle(labels, n, m, P0, P1, pure=pure) == bool(oracles.four_cycles(imp, n, m))


@compiled
def test_parity_on_single_game_kernels():
    rng = random.Random(2)
    for _ in range(400):
        n, m, labels, prefs = _random_instance(rng)
        P0, P1 = (p.masks for p in prefs)
        rowmask, colmask = rng.randrange(1, 1 << n), rng.randrange(1, 1 << m)
        for f, extra in (
            (kernels.pattern_flags, ()),
            (kernels.has_cycle, (True, rowmask, colmask)),
            (kernels.weakly_terminating, (False, rowmask, colmask)),
            (kernels.weakly_terminating, (True, rowmask, colmask)),
            (kernels.has_four_cycle, ()),
            (kernels.subgame_without_ne, ()),
            (kernels.removable_choice, ()),
        ):
            assert f(labels, n, m, P0, P1, *extra, pure=False) == f(labels, n, m, P0, P1, *extra, pure=True)


def _orders(prefs):
    return np.array([p.masks for p in prefs], dtype=np.uint32)


@compiled
def test_parity_on_sweeps():
    rng = random.Random(3)
    w3, a3 = _orders(weak_orders(3)), _orders(acyclic_relations(3))
    for _ in range(12):
        n, m = rng.randint(2, 3), rng.randint(2, 3)
        labels = [rng.randrange(3) for _ in range(n * m)]
        for f, orders in ((kernels.sweep_orders, w3), (kernels.structure_witnesses, a3),
                          (kernels.sweep_removable, w3)):
            a = f(labels, n, m, orders, pure=False)
            b = f(labels, n, m, orders, pure=True)
            assert tuple(map(_norm, a)) == tuple(map(_norm, b))


def _norm(x):
    return [tuple(v) for v in x] if isinstance(x, list) else x


@pytest.mark.parametrize("pure", [True, pytest.param(False, marks=compiled)])
def test_walk_rule(pure):
    c = build_chain(fixtures.load("MP2"))
    offsets, targets = c.csr()
    raw = np.array([0, 1, 3, 2**64 - 1], dtype=np.uint64)
    # lambda = 1/2: even draws stay, odd draws take the single out-edge
    state = expect = 0
    for r in raw.tolist():
        if r % 2 == 1:
            expect = targets[offsets[expect]]
    assert kernels.walk(offsets, targets, c.absorbing(), state, 1, 2, raw, pure=pure) == (expect, 4, False)


@compiled
def test_walk_parity():
    rng = np.random.Generator(np.random.PCG64(5))
    for name, lam in (("WA10", (1, 2)), ("XYZ44", (1, 3)), ("PUC2", (0, 1))):
        c = build_chain(fixtures.load(name))
        offsets, targets = c.csr()
        raw = rng.bit_generator.random_raw(20_000)
        for start in range(c.size):
            a = kernels.walk(offsets, targets, c.absorbing(), start, *lam, raw, pure=False)
            b = kernels.walk(offsets, targets, c.absorbing(), start, *lam, raw, pure=True)
            assert a == b


def test_pure_env_switch():
    env = dict(os.environ, BRDYN_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from brdyn import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "pure"

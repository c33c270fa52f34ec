"""Time the compiled kernels against their pure-Python twins.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Each workload runs through ``brdyn.kernels`` with ``pure=False`` and
``pure=True`` and the results are compared for equality before timing is
reported.  Without the compiled extension only the pure column is shown.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from brdyn import fixtures, kernels
from brdyn.enumerate import acyclic_relations, structure_orbits, weak_orders
from brdyn.stochastic import build_chain


def _table(prefs):
    k = prefs[0].outcome_count
    return np.array([p.masks for p in prefs], dtype=np.uint32).reshape(len(prefs), k)


def workloads():
    orbits = [lab for lab, _ in structure_orbits(3, 3, 4) if max(lab) == 3][:20]
    weak4 = _table(weak_orders(4))
    acyc3 = _table(acyclic_relations(3))
    free3 = [lab for lab, _ in structure_orbits(3, 3, 3) if max(lab) == 2][:10]

    def sweep(pure):
        return [kernels.sweep_orders(lab, 3, 3, weak4, pure=pure) for lab in orbits]

    def witnesses(pure):
        return [kernels.structure_witnesses(lab, 3, 3, acyc3, pure=pure) for lab in free3]

    chain = build_chain(fixtures.load("WA10"))
    offsets, targets = chain.csr()
    absorbing = chain.absorbing()
    raw = np.random.Generator(np.random.PCG64(1)).bit_generator.random_raw(200_000)

    def walk(pure):
        return [kernels.walk(offsets, targets, absorbing, s, 1, 2, raw, pure=pure) for s in range(0, 90, 9)]

    return [
        ("sweep_orders 3x3, 75^2 weak-order pairs x20", sweep),
        ("structure_witnesses 3x3, 25^2 acyclic pairs x10", witnesses),
        ("walk WA10 chain, 10 starts", walk),
    ]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    compiled = kernels.BACKEND == "compiled"
    print(f"backend: {kernels.BACKEND}")
    print(f"{'workload':52} {'pure s':>9} {'compiled s':>11} {'speedup':>8}")
    for name, fn in workloads():
        pure_t = best_of(lambda: fn(True), args.repeat)
        if compiled:
            if fn(True) != fn(False):
                raise SystemExit(f"backends disagree on {name}")
            fast_t = best_of(lambda: fn(False), args.repeat)
            print(f"{name:52} {pure_t:9.3f} {fast_t:11.4f} {pure_t / fast_t:7.0f}x")
        else:
            print(f"{name:52} {pure_t:9.3f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()

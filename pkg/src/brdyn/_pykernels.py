"""Pure-Python twin of the compiled kernels; same signatures, same results.

Every kernel works on a two-player n x m structure given as a flat row-major
label list plus, for each player, one bitmask per outcome: bit ``y`` of
``masks[x]`` is set when outcome ``x`` is strictly worse than ``y``.
"""

from __future__ import annotations

EC_BIT = 1
PUB_BIT = 2
PUC_BIT = 4


def _lt(masks, u, w):
    return (masks[u] >> w) & 1


def _kind_bits(A, B, x, y, z, t):
    if not (_lt(A, x, y) and _lt(B, y, z)):
        return 0
    bits = 0
    if _lt(A, z, t) and _lt(B, t, x):
        bits |= EC_BIT
    if _lt(A, z, t) and not _lt(B, t, x) and _lt(A, x, t):
        bits |= PUB_BIT
    if _lt(B, x, t) and _lt(A, t, z) and _lt(B, z, x):
        bits |= PUC_BIT
    return bits


def rectangle_flags(c00, c10, c11, c01, P0, P1):
    """Forbidden kinds matched by one rectangle under any of its eight symmetries."""
    c = ((c00, c01), (c10, c11))
    bits = 0
    for code in range(8):
        fr, fc = code & 1, (code >> 1) & 1
        if code & 4:
            bits |= _kind_bits(P1, P0, c[fr][fc], c[fr][1 ^ fc], c[1 ^ fr][1 ^ fc], c[1 ^ fr][fc])
        else:
            bits |= _kind_bits(P0, P1, c[fr][fc], c[1 ^ fr][fc], c[1 ^ fr][1 ^ fc], c[fr][1 ^ fc])
    return bits


def pattern_flags(labels, n, m, P0, P1, stop_mask=0):
    """OR of the forbidden kinds present anywhere; returns early once ``stop_mask`` is covered."""
    bits = 0
    for i0 in range(n):
        for i1 in range(i0 + 1, n):
            for j0 in range(m):
                for j1 in range(j0 + 1, m):
                    bits |= rectangle_flags(
                        labels[i0 * m + j0], labels[i1 * m + j0],
                        labels[i1 * m + j1], labels[i0 * m + j1], P0, P1,
                    )
                    if stop_mask and bits & stop_mask == stop_mask:
                        return bits
    return bits


def _successors(labels, n, m, P0, P1, maximising, rowmask, colmask):
    succ = [[] for _ in range(n * m)]
    for i in range(n):
        if not rowmask >> i & 1:
            continue
        for j in range(m):
            if not colmask >> j & 1:
                continue
            u = i * m + j
            lu = labels[u]
            better = [k * m + j for k in range(n) if k != i and rowmask >> k & 1 and _lt(P0, lu, labels[k * m + j])]
            if maximising:
                better = [v for v in better if not any(_lt(P0, labels[v], labels[w]) for w in better)]
            succ[u].extend(better)
            better = [i * m + k for k in range(m) if k != j and colmask >> k & 1 and _lt(P1, lu, labels[i * m + k])]
            if maximising:
                better = [v for v in better if not any(_lt(P1, labels[v], labels[w]) for w in better)]
            succ[u].extend(better)
    return succ


def _nodes(n, m, rowmask, colmask):
    return [i * m + j for i in range(n) if rowmask >> i & 1 for j in range(m) if colmask >> j & 1]


def has_cycle(labels, n, m, P0, P1, maximising=False, rowmask=-1, colmask=-1):
    rowmask &= (1 << n) - 1
    colmask &= (1 << m) - 1
    succ = _successors(labels, n, m, P0, P1, maximising, rowmask, colmask)
    nodes = _nodes(n, m, rowmask, colmask)
    indeg = [0] * (n * m)
    for u in nodes:
        for v in succ[u]:
            indeg[v] += 1
    stack = [u for u in nodes if indeg[u] == 0]
    removed = 0
    while stack:
        u = stack.pop()
        removed += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return removed != len(nodes)


def weakly_terminating(labels, n, m, P0, P1, maximising=False, rowmask=-1, colmask=-1):
    """Every profile of the subgame reaches a sink of the subgame's graph."""
    rowmask &= (1 << n) - 1
    colmask &= (1 << m) - 1
    succ = _successors(labels, n, m, P0, P1, maximising, rowmask, colmask)
    nodes = _nodes(n, m, rowmask, colmask)
    pred = [[] for _ in range(n * m)]
    for u in nodes:
        for v in succ[u]:
            pred[v].append(u)
    seen = [False] * (n * m)
    stack = [u for u in nodes if not succ[u]]
    for u in stack:
        seen[u] = True
    count = 0
    while stack:
        v = stack.pop()
        count += 1
        for u in pred[v]:
            if not seen[u]:
                seen[u] = True
                stack.append(u)
    return count == len(nodes)


def has_four_cycle(labels, n, m, P0, P1):
    """Some rectangle whose four sides all point the same way round."""
    for i0 in range(n):
        for i1 in range(i0 + 1, n):
            for j0 in range(m):
                for j1 in range(j0 + 1, m):
                    a, b = labels[i0 * m + j0], labels[i1 * m + j0]
                    c, d = labels[i1 * m + j1], labels[i0 * m + j1]
                    # a (i0,j0) -> b (i1,j0) -> c (i1,j1) -> d (i0,j1) -> a, or the reverse
                    if _lt(P0, a, b) and _lt(P1, b, c) and _lt(P0, c, d) and _lt(P1, d, a):
                        return True
                    if _lt(P1, a, d) and _lt(P0, d, c) and _lt(P1, c, b) and _lt(P0, b, a):
                        return True
    return False


def subgame_without_ne(labels, n, m, P0, P1):
    """Some rows x columns subgame has no Nash equilibrium."""
    up = [0] * (n * m)
    side = [0] * (n * m)
    for i in range(n):
        for j in range(m):
            u = i * m + j
            lu = labels[u]
            for k in range(n):
                if _lt(P0, lu, labels[k * m + j]):
                    up[u] |= 1 << k
            for k in range(m):
                if _lt(P1, lu, labels[i * m + k]):
                    side[u] |= 1 << k
    for R in range(1, 1 << n):
        for C in range(1, 1 << m):
            found = False
            for i in range(n):
                if not R >> i & 1:
                    continue
                for j in range(m):
                    if C >> j & 1 and not up[i * m + j] & R and not side[i * m + j] & C:
                        found = True
                        break
                if found:
                    break
            if not found:
                return True
    return False


def sweep_orders(labels, n, m, orders):
    """Every ordered pair of the given preferences (rows of per-outcome masks).

    Returns ``(games, pattern_free_cycles, sheath_candidates)``: pairs with no
    forbidden pattern whose improvement graph still has a cycle, and pairs with
    no strongly forbidden pattern whose maximising graph has a cycle.
    """
    violations = []
    candidates = []
    R = len(orders)
    for a in range(R):
        P0 = orders[a]
        for b in range(R):
            P1 = orders[b]
            bits = pattern_flags(labels, n, m, P0, P1)
            if bits == 0 and has_cycle(labels, n, m, P0, P1, False):
                violations.append((a, b))
            if bits & (EC_BIT | PUB_BIT) == 0 and has_cycle(labels, n, m, P0, P1, True):
                candidates.append((a, b))
    return R * R, violations, candidates


def structure_witnesses(labels, n, m, orders):
    """Over all pairs of the given preferences: (some cycle, some 4-cycle, some subgame without NE)."""
    cyc = four = empty = False
    R = len(orders)
    for a in range(R):
        for b in range(R):
            P0, P1 = orders[a], orders[b]
            if not cyc and has_cycle(labels, n, m, P0, P1, False):
                cyc = True
            if not four and has_four_cycle(labels, n, m, P0, P1):
                four = True
            if not empty and subgame_without_ne(labels, n, m, P0, P1):
                empty = True
            if cyc and four and empty:
                return True, True, True
    return cyc, four, empty


def removable_choice(labels, n, m, P0, P1):
    """First (player, strategy) whose deletion keeps maximising improvement weakly terminating, or None."""
    full_r, full_c = (1 << n) - 1, (1 << m) - 1
    for s in range(n):
        if weakly_terminating(labels, n, m, P0, P1, True, full_r & ~(1 << s), full_c):
            return (0, s)
    for s in range(m):
        if weakly_terminating(labels, n, m, P0, P1, True, full_r, full_c & ~(1 << s)):
            return (1, s)
    return None


def sweep_removable(labels, n, m, orders):
    """Pairs of preferences with weakly terminating maximising improvement, and those without a removable strategy."""
    terminating = 0
    failures = []
    R = len(orders)
    for a in range(R):
        for b in range(R):
            P0, P1 = orders[a], orders[b]
            if not weakly_terminating(labels, n, m, P0, P1, True):
                continue
            terminating += 1
            if removable_choice(labels, n, m, P0, P1) is None:
                failures.append((a, b))
    return R * R, terminating, failures


def walk(offsets, targets, absorbing, state, p, q, raw):
    """Run the lazy chain on a block of raw 64-bit draws.

    Each draw ``r`` keeps the state when ``r % q < p`` and otherwise follows
    edge ``(r // q) % degree``.  Returns ``(state, draws_used, absorbed)``;
    an absorbing start uses no draw.
    """
    used = 0
    for r in raw:
        if absorbing[state]:
            return state, used, True
        used += 1
        r = int(r)
        if r % q < p:
            continue
        lo = offsets[state]
        deg = offsets[state + 1] - lo
        state = int(targets[lo + (r // q) % deg])
    return state, used, bool(absorbing[state])

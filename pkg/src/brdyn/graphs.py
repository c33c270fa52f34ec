"""Small directed-graph helpers on adjacency lists ``succ[u] -> list of v``."""

from __future__ import annotations

from collections import deque
from typing import Sequence


def strongly_connected_components(succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative.  Components come out in reverse topological order."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, i = work[-1]
            if i < len(succ[u]):
                work[-1] = (u, i + 1)
                v = succ[u][i]
                if index[v] == -1:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, 0))
                elif on_stack[v]:
                    low[u] = min(low[u], index[v])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == u:
                        break
                comps.append(sorted(comp))
    return comps


def bottom_components(succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """SCCs with no edge leaving them."""
    comps = strongly_connected_components(succ)
    where = {}
    for k, comp in enumerate(comps):
        for u in comp:
            where[u] = k
    return [
        comp
        for k, comp in enumerate(comps)
        if all(where[v] == k for u in comp for v in succ[u])
    ]


def find_cycle(succ: Sequence[Sequence[int]]) -> list[int] | None:
    """Some directed cycle ``[u0, u1, ..., uk]`` (closing edge uk -> u0), or None."""
    n = len(succ)
    colour = [0] * n
    parent = [-1] * n
    for root in range(n):
        if colour[root]:
            continue
        work = [(root, 0)]
        colour[root] = 1
        while work:
            u, i = work[-1]
            if i < len(succ[u]):
                work[-1] = (u, i + 1)
                v = succ[u][i]
                if colour[v] == 0:
                    colour[v] = 1
                    parent[v] = u
                    work.append((v, 0))
                elif colour[v] == 1:
                    cyc = [u]
                    while cyc[-1] != v:
                        cyc.append(parent[cyc[-1]])
                    return cyc[::-1]
                continue
            colour[u] = 2
            work.pop()
    return None


def distances_to(succ: Sequence[Sequence[int]], targets) -> list[int | None]:
    """Shortest path length from every node to the target set (None if unreachable)."""
    n = len(succ)
    pred: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        for v in succ[u]:
            pred[v].append(u)
    dist: list[int | None] = [None] * n
    queue = deque()
    for t in targets:
        dist[t] = 0
        queue.append(t)
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if dist[u] is None:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def simple_cycles(succ: Sequence[Sequence[int]], limit: int | None = None) -> list[list[int]]:
    """All simple cycles, each rooted at its smallest node.

    Plain backtracking; fine for the few dozen nodes of desk-scale games.
    """
    out: list[list[int]] = []
    n = len(succ)
    for root in range(n):
        path = [root]
        on_path = {root}
        work = [iter(succ[root])]
        while work:
            for v in work[-1]:
                if v == root:
                    out.append(list(path))
                    if limit is not None and len(out) >= limit:
                        return out
                elif v > root and v not in on_path:
                    path.append(v)
                    on_path.add(v)
                    work.append(iter(succ[v]))
                    break
            else:
                work.pop()
                on_path.discard(path.pop())
    return out

"""Palette graphs and maximum bipartite matching."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

INF = float("inf")


@dataclass
class PaletteGraph:
    """Left side: uncolored vertices; right side: colors; ``adj[i]`` lists
    right indices available to left vertex ``i``."""

    left: List[int]
    right: List[int]
    adj: List[List[int]]

    def as_color_lists(self) -> Dict[int, List[int]]:
        return {v: [self.right[j] for j in self.adj[i]] for i, v in enumerate(self.left)}


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int):
    """Maximum matching; returns ``match_left`` with ``-1`` for unmatched."""
    n_left = len(adj)
    ml = [-1] * n_left
    mr = [-1] * n_right
    dist = [0] * n_left

    def bfs():
        q = deque()
        found = False
        for u in range(n_left):
            if ml[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        while q:
            u = q.popleft()
            for w in adj[u]:
                m = mr[w]
                if m == -1:
                    found = True
                elif dist[m] == INF:
                    dist[m] = dist[u] + 1
                    q.append(m)
        return found

    def dfs(u):
        # iterative augmenting-path search along the BFS layers
        stack = [(u, iter(adj[u]))]
        path = []
        while stack:
            x, it = stack[-1]
            advanced = False
            for w in it:
                m = mr[w]
                if m == -1:
                    path.append((x, w))
                    for a, b in path:
                        ml[a] = b
                        mr[b] = a
                    return True
                if dist[m] == dist[x] + 1:
                    path.append((x, w))
                    stack.append((m, iter(adj[m])))
                    advanced = True
                    break
            if not advanced:
                dist[x] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if ml[u] == -1:
                dfs(u)
    return ml


def find_L_perfect_matching(pg: PaletteGraph) -> Optional[Dict[int, int]]:
    """Vertex -> color matching saturating the left side, or ``None``."""
    ml = hopcroft_karp(pg.adj, len(pg.right))
    if any(m == -1 for m in ml):
        return None
    return {pg.left[i]: pg.right[m] for i, m in enumerate(ml)}


def build_palette_graph(members, coloring, list_id: Optional[int] = None) -> PaletteGraph:
    """Uncolored members vs. colors unused inside the clique.

    An edge joins ``v`` and ``c`` when ``c`` is available to ``v`` under
    the current coloring; with ``list_id`` only colors of that list of ``v``
    are kept (the sampled subgraph).
    """
    col = coloring.color
    left = sorted(int(v) for v in members if not col[v])
    used = {int(col[v]) for v in members if col[v]}
    right = [c for c in range(1, coloring.q + 1) if c not in used]
    pos = {c: j for j, c in enumerate(right)}
    adj = []
    pal = coloring.kb.palettes
    for v in left:
        blocked = coloring.neighbor_colors(v)
        if list_id is None:
            cand = right
        else:
            cand = [int(c) for c in pal.get(list_id, v)]
        adj.append([pos[c] for c in cand if c in pos and c not in blocked])
    return PaletteGraph(left, right, adj)


# ---------------------------------------------------------------- random instances

def palette_conditions(pg: PaletteGraph) -> Dict[str, bool]:
    """The three size and degree conditions under which edge sampling keeps
    an ``L``-perfect matching: ``k <= |R| <= 2k``, every left degree at least
    ``2k/3``, and every left set ``S`` with ``|S| >= k/2`` has total degree at
    least ``|S| k - k/4``.

    The last condition is checked on the lowest-degree sets, which are the
    worst case for each size.
    """
    k = len(pg.left)
    degs = sorted(len(a) for a in pg.adj)
    sizes = k <= len(pg.right) <= 2 * k
    min_deg = all(d >= 2 * k / 3 for d in degs)
    ok3, run = True, 0
    for s, d in enumerate(degs, 1):
        run += d
        if s >= k / 2 and run < s * k - k / 4:
            ok3 = False
            break
    return {"sizes": sizes, "min_degree": min_deg, "sets": ok3}


def random_palette_graph(k: int, rng, right: Optional[int] = None) -> PaletteGraph:
    """A random bipartite graph meeting :func:`palette_conditions`.

    Most left vertices get degree at least ``k``; a random few fall short of
    ``k`` by a total of at most ``k/4``, none below ``2k/3``.
    """
    r = int(right if right is not None else rng.integers(k, 2 * k + 1))
    degs = rng.integers(k, r + 1, size=k)
    budget = k // 4
    for v in rng.permutation(k):
        if budget <= 0:
            break
        cut = int(rng.integers(0, min(budget, k - -(-2 * k // 3)) + 1))
        degs[v] = min(degs[v], k - cut)
        budget -= max(0, k - degs[v])
    adj = [sorted(rng.choice(r, size=int(d), replace=False).tolist()) for d in degs]
    return PaletteGraph(list(range(k)), list(range(r)), adj)


def sample_edges(pg: PaletteGraph, rate: float, rng) -> PaletteGraph:
    """Keep each edge independently with probability ``rate``."""
    adj = []
    for a in pg.adj:
        arr = np.asarray(a, dtype=np.int64)
        adj.append(arr[rng.random(len(arr)) < rate].tolist())
    return PaletteGraph(list(pg.left), list(pg.right), adj)


def sampling_rate(k: int, delta: float) -> float:
    return min(1.0, 20.0 / k * (math.log(k) + math.log(1.0 / delta)))


__all__ = ["PaletteGraph", "hopcroft_karp", "find_L_perfect_matching", "build_palette_graph",
           "palette_conditions", "random_palette_graph", "sample_edges", "sampling_rate"]

"""Synthetic instances: random bounded-degree graphs and planted structures.

Planted instances are assembled from dense building blocks laid out on
consecutive vertex ids, followed by a sparse random background.  Block
vertices with spare degree are wired to background vertices by a bounded
random bipartite attachment; every background vertex receives at most
``per_block_cap`` edges from any single block so that attachments never turn
into friends of a clique by accident.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .errors import InfeasibleSpec
from .graph import Graph

BLOCK_KINDS = (
    "anti_matching_clique",
    "three_is_clique",
    "friend_clique",
    "inside_friend_clique",
    "popular",
    "expanding",
    "plain_clique",
    "small_clique",
    "holey",
)


@dataclass
class BlockSpec:
    kind: str
    params: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in BLOCK_KINDS:
            raise ValueError(f"unknown block kind {self.kind!r}")


@dataclass
class PlantSpec:
    """Recipe for :func:`gen_planted_instance`.

    ``attach`` is the fraction of each block vertex's spare degree wired to
    the background (1.0 fills every block vertex up to ``delta``).
    """

    delta: int
    blocks: List[BlockSpec] = field(default_factory=list)
    n_background: int = 0
    background_p: float = 0.0
    attach: float = 1.0
    per_block_cap: int = 1
    rho: int = 4


@dataclass
class PlantedBlock:
    kind: str
    members: List[int]
    edges: List[tuple]
    roles: Dict = field(default_factory=dict)


class _Builder:
    def __init__(self, delta):
        self.delta = delta
        self.adj: List[set] = []

    def add_vertices(self, k):
        start = len(self.adj)
        self.adj.extend(set() for _ in range(k))
        return list(range(start, start + k))

    def add_edge(self, u, v):
        if u == v or v in self.adj[u]:
            return False
        if len(self.adj[u]) >= self.delta or len(self.adj[v]) >= self.delta:
            raise InfeasibleSpec(f"edge ({u}, {v}) would exceed degree {self.delta}")
        self.adj[u].add(v)
        self.adj[v].add(u)
        return True

    def clique(self, vs, missing=()):
        miss = {frozenset(e) for e in missing}
        for i, u in enumerate(vs):
            for v in vs[i + 1:]:
                if frozenset((u, v)) not in miss:
                    self.add_edge(u, v)

    def residual(self, v):
        return self.delta - len(self.adj[v])


def _block(b: _Builder, spec: BlockSpec, rho: int, rng) -> PlantedBlock:
    d = b.delta
    prm = spec.params
    kind = spec.kind
    roles: Dict = {}
    if kind == "anti_matching_clique":
        size = prm.get("size", d + 1)
        vs = b.add_vertices(size)
        anti = [(vs[0], vs[1]), (vs[2], vs[3])]
        b.clique(vs, anti)
        roles["anti_edges"] = anti
        members = vs
    elif kind == "three_is_clique":
        size = prm.get("size", d + 1)
        vs = b.add_vertices(size)
        tri = [(vs[0], vs[1]), (vs[0], vs[2]), (vs[1], vs[2])]
        b.clique(vs, tri)
        roles["independent_set"] = vs[:3]
        members = vs
    elif kind in ("friend_clique", "popular", "expanding", "plain_clique"):
        size = prm.get("size", d - 1)
        vs = b.add_vertices(size)
        b.clique(vs)
        members = vs
        if kind == "friend_clique":
            fd = prm.get("friend_degree", d // 2)
            if not 1 <= fd < size:
                raise InfeasibleSpec("friend degree must leave a non-neighbor in the clique")
            s = b.add_vertices(1)[0]
            for v in vs[:fd]:
                b.add_edge(s, v)
            roles["friend"] = s
            roles["friend_neighbors"] = vs[:fd]
        elif kind == "popular":
            fd = prm.get("friend_degree", max(2, d // 4))
            if 2 * fd - 1 > size - 2:
                raise InfeasibleSpec("popular friends do not fit into the clique")
            x1, x2 = b.add_vertices(2)
            n1 = vs[:fd]
            n2 = vs[fd - 1:2 * fd - 1]  # overlap in exactly one vertex
            for v in n1:
                b.add_edge(x1, v)
            for v in n2:
                b.add_edge(x2, v)
            roles["friends"] = (x1, x2)
            roles["shared"] = vs[fd - 1]
    elif kind == "inside_friend_clique":
        size = prm.get("size", d - 1)
        miss = prm.get("misses", 2)
        vs = b.add_vertices(size)
        b.clique(vs)
        s = b.add_vertices(1)[0]
        for v in vs[miss:]:
            b.add_edge(s, v)
        roles["friend"] = s
        members = vs + [s]
    elif kind == "small_clique":
        size = prm.get("size", d + 1 - rho - prm.get("gap", 1))
        vs = b.add_vertices(size)
        b.clique(vs)
        members = vs
    elif kind == "holey":
        size = prm.get("size", d + 1)
        frac = prm.get("anti_fraction", 0.25)
        vs = b.add_vertices(size)
        k = max(2, int(frac * size))
        perm = rng.permutation(size)
        anti = [(vs[perm[2 * i]], vs[perm[2 * i + 1]]) for i in range(min(k, size // 2))]
        # a few extra anti-edges chained on the matching
        extra = [(vs[perm[2 * i + 1]], vs[perm[2 * i + 2]])
                 for i in range(min(k, size // 2) - 1) if i % 2 == 0]
        b.clique(vs, anti + extra)
        roles["anti_edges"] = anti + extra
        members = vs
    else:  # pragma: no cover - guarded by BlockSpec
        raise ValueError(kind)
    edges = sorted((min(u, v), max(u, v)) for u in members for v in b.adj[u] if v in set(members) and u < v)
    return PlantedBlock(kind, list(members), edges, roles)


def gen_planted_instance(spec: PlantSpec, seed: int):
    """Build a planted instance.

    Returns ``(graph, blocks)`` where ``blocks`` lists a
    :class:`PlantedBlock` per requested block with its vertex positions and
    the induced edge list at construction time.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x91A7]))
    b = _Builder(spec.delta)
    blocks = [_block(b, bs, spec.rho, rng) for bs in spec.blocks]
    block_of = {}
    for i, blk in enumerate(blocks):
        for v in blk.members:
            block_of[v] = i
        for key in ("friend",):
            if key in blk.roles:
                block_of.setdefault(blk.roles[key], i)
        for v in blk.roles.get("friends", ()):
            block_of.setdefault(v, i)
    bg = b.add_vertices(spec.n_background)
    # sparse background first, then attachments
    if spec.background_p > 0 and len(bg) > 1:
        for i, u in enumerate(bg):
            draws = rng.random(len(bg) - i - 1)
            for j in np.flatnonzero(draws < spec.background_p):
                v = bg[i + 1 + j]
                if b.residual(u) > 0 and b.residual(v) > 0:
                    b.add_edge(u, v)
    if spec.attach > 0 and blocks:
        attached_from = [dict() for _ in blocks]  # block -> {bg vertex: count}
        order = [v for blk in blocks for v in blk.members]
        for blk_i, blk in enumerate(blocks):
            for key in ("friend",):
                if key in blk.roles and blk.roles[key] not in blk.members:
                    order.append(blk.roles[key])
            order.extend(v for v in blk.roles.get("friends", ()))
        for v in order:
            want = int(round(spec.attach * b.residual(v)))
            i = block_of[v]
            tries = 0
            while want > 0:
                tries += 1
                if tries > 1000:
                    raise InfeasibleSpec(f"cannot attach vertex {v} to the background")
                if not bg:
                    raise InfeasibleSpec("no background vertices to attach to")
                w = bg[int(rng.integers(len(bg)))]
                if w in b.adj[v] or b.residual(w) <= 0:
                    continue
                if attached_from[i].get(w, 0) >= spec.per_block_cap:
                    continue
                b.add_edge(v, w)
                attached_from[i][w] = attached_from[i].get(w, 0) + 1
                want -= 1
    g = Graph(len(b.adj), [sorted(a) for a in b.adj], spec.delta)
    return g, blocks


def gen_random_graph(n: int, max_deg: int, edge_prob: float, seed: int) -> Graph:
    """Erdos-Renyi pairs in lexicographic order, skipping degree violations."""
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in [0, 1]")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5EED]))
    adj = [[] for _ in range(n)]
    deg = np.zeros(n, dtype=np.int64)
    for u in range(n - 1):
        if edge_prob >= 1.0:
            cand = np.arange(u + 1, n)
        else:
            draws = rng.random(n - u - 1)
            cand = u + 1 + np.flatnonzero(draws < edge_prob)
        for v in cand:
            if deg[u] >= max_deg:
                break
            if deg[v] < max_deg:
                adj[u].append(int(v))
                adj[v].append(u)
                deg[u] += 1
                deg[v] += 1
    return Graph(n, adj, max_deg)


def gen_sparse_random_graph(n: int, max_deg: int, avg_deg: float, seed: int) -> Graph:
    """Random graph with ~``n*avg_deg/2`` edges, capped at ``max_deg``.

    Samples endpoints directly instead of scanning all pairs, so it is usable
    for large ``n``.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5A5E]))
    m = int(n * avg_deg / 2)
    deg = np.zeros(n, dtype=np.int64)
    seen = set()
    edges = []
    us = rng.integers(0, n, size=2 * m + 16)
    vs = rng.integers(0, n, size=2 * m + 16)
    for u, v in zip(us.tolist(), vs.tolist()):
        if len(edges) >= m:
            break
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen or deg[u] >= max_deg or deg[v] >= max_deg:
            continue
        seen.add(key)
        deg[u] += 1
        deg[v] += 1
        edges.append(key)
    return Graph.from_edges(n, edges, delta=max_deg, check_duplicates=False)


def disjoint_cliques(count: int, size: int, delta: Optional[int] = None) -> Graph:
    adj = []
    for c in range(count):
        base = c * size
        for i in range(size):
            adj.append([base + j for j in range(size) if j != i])
    return Graph(count * size, adj, delta if delta is not None else size - 1)


def default_mixed_spec(delta: int, rho: int = 4, n_background: Optional[int] = None,
                       kinds=None) -> PlantSpec:
    """One block of each kind handled by a distinct pipeline step."""
    kinds = kinds or ["anti_matching_clique", "three_is_clique", "friend_clique",
                      "inside_friend_clique", "popular", "expanding", "small_clique"]
    blocks = [BlockSpec(k) for k in kinds]
    if n_background is None:
        n_background = 6 * delta * len(blocks) // 2
    return PlantSpec(delta=delta, blocks=blocks, n_background=n_background,
                     background_p=min(1.0, 0.15 * delta / max(1, n_background)), rho=rho)

"""Almost-clique decomposition from anchor samples.

During the pass every vertex joins the anchor set ``T`` independently with
probability ``r``; all edges touching ``T`` are kept.  Afterwards
``|N(u) & N(v)|`` is estimated by ``|N(u) & N(v) & T| / r``.  Vertices whose
estimate with ``v`` reaches ``(1 - eps/4) Delta`` are *similar* to ``v``;
vertices similar to at least half their degree seed the clusters, which are
the connected components of the similarity graph among them.  Clusters are
then pruned and grown until every member has few anti-neighbors and few
external neighbors and every outsider misses many members, with all counts
again estimated through ``T``.  With ``r = 1`` every estimate is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components


@dataclass
class Decomposition:
    n: int
    sparse: List[int]
    cliques: List[List[int]]
    clique_of: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.clique_of is None:
            self.clique_of = np.full(self.n, -1, dtype=np.int64)
            for i, c in enumerate(self.cliques):
                self.clique_of[np.asarray(c, dtype=np.int64)] = i

    def as_dict(self):
        return {"sparse": list(map(int, self.sparse)),
                "cliques": [list(map(int, c)) for c in self.cliques]}


def anchor_rate(n: int, delta: int, eps: float, beta: float) -> float:
    if delta <= 0:
        return 1.0
    return min(1.0, beta * math.log(max(n, 2)) / (eps * eps * delta))


def _incidence(n, edges, is_anchor):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    u, v = edges[:, 0], edges[:, 1]
    rows, cols = [], []
    m = is_anchor[v]
    rows.append(u[m]); cols.append(v[m])
    m = is_anchor[u]
    rows.append(v[m]); cols.append(u[m])
    r = np.concatenate(rows) if rows else np.zeros(0, np.int64)
    c = np.concatenate(cols) if cols else np.zeros(0, np.int64)
    data = np.ones(len(r), dtype=np.int32)
    M = sp.csr_matrix((data, (r, c)), shape=(n, n))
    M.sum_duplicates()
    M.data[:] = 1
    return M


def estimate_decomposition(n: int, delta: int, eps: float, edges, is_anchor, rate: float,
                           degrees, max_rounds: int = 10, chunk: int = 2048) -> Decomposition:
    """Cluster dense vertices from anchor-incident ``edges``.

    ``is_anchor`` is a boolean mask of ``T``; ``degrees`` are exact stream
    degrees.  Returns a :class:`Decomposition` with sorted cliques ordered by
    their smallest member.
    """
    if n == 0:
        return Decomposition(0, [], [])
    is_anchor = np.asarray(is_anchor, dtype=bool)
    degrees = np.asarray(degrees, dtype=np.int64)
    M = _incidence(n, edges, is_anchor)
    MT = M.T.tocsr()
    tau = (1 - eps / 4) * delta * rate
    # similarity graph, built in row chunks to bound memory
    sim_r, sim_c = [], []
    for start in range(0, n, chunk):
        block = (M[start:start + chunk] @ MT).tocoo()
        keep = (block.data >= tau - 1e-9) & (block.row + start != block.col)
        sim_r.append(block.row[keep] + start)
        sim_c.append(block.col[keep])
    sr = np.concatenate(sim_r) if sim_r else np.zeros(0, np.int64)
    sc = np.concatenate(sim_c) if sim_c else np.zeros(0, np.int64)
    nsim = np.bincount(sr, minlength=n)
    dense = (nsim >= np.maximum(1, np.ceil(degrees / 2))) & (degrees > 0)
    keep = dense[sr] & dense[sc]
    S = sp.csr_matrix((np.ones(int(keep.sum()), dtype=np.int8), (sr[keep], sc[keep])), shape=(n, n))
    ncomp, label = connected_components(S, directed=False)
    groups = {}
    for v in np.flatnonzero(dense):
        groups.setdefault(int(label[v]), []).append(int(v))
    clusters = [set(g) for g in groups.values() if len(g) > 1]
    clusters = _refine(clusters, M, degrees, delta, eps, rate, max_rounds)
    clusters = sorted((sorted(c) for c in clusters), key=lambda c: c[0])
    in_cl = np.zeros(n, dtype=bool)
    for c in clusters:
        in_cl[c] = True
    return Decomposition(n, [int(v) for v in np.flatnonzero(~in_cl)], clusters)


def _refine(clusters, M, degrees, delta, eps, rate, max_rounds):
    n = M.shape[0]
    lo, hi = (1 - eps / 2) * delta, (1 + eps / 2) * delta
    limit = eps * delta
    promote_gap = (eps / 2) * delta
    for _ in range(max_rounds):
        changed = False
        owner = np.full(n, -1, dtype=np.int64)
        for i, c in enumerate(clusters):
            owner[list(c)] = i
        new = []
        for i, c in enumerate(clusters):
            ind = np.zeros(n, dtype=np.float64)
            ind[list(c)] = 1.0
            est_in = (M @ ind) / rate  # estimated |N(v) & C| for all v
            size = len(c)
            members = np.fromiter(c, dtype=np.int64)
            anti = size - 1 - est_in[members]
            ext = degrees[members] - est_in[members]
            bad = members[(anti > limit) | (ext > limit)]
            if len(bad):
                changed = True
                c = c - set(bad.tolist())
            size = len(c)
            if size:
                ind[:] = 0.0
                ind[list(c)] = 1.0
                est_in = (M @ ind) / rate
                cand = np.flatnonzero((size - est_in < promote_gap) & (owner == -1))
                cand = [int(v) for v in cand if v not in c]
                if cand:
                    changed = True
                    c = c | set(cand)
                    owner[cand] = i
            new.append(c)
        clusters = new
        sized = [c for c in clusters if lo <= len(c) <= hi]
        if len(sized) != len(clusters):
            changed = True
        clusters = sized
        if not changed:
            break
    return clusters


def decompose_exact(g, eps: float) -> Decomposition:
    """The same procedure with every vertex an anchor, on a full graph."""
    deg = np.array([g.degree(v) for v in range(g.n)], dtype=np.int64)
    return estimate_decomposition(g.n, g.delta, eps, g.edge_array(),
                                  np.ones(g.n, dtype=bool), 1.0, deg)


__all__ = ["Decomposition", "anchor_rate", "estimate_decomposition", "decompose_exact"]

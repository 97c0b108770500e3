"""Step 1: drop the cliques colored last, then the Reed Transform.

Every ``2 rho``-friendly critical clique with a ``(delta-1)``-core is taken
out of the graph.  When the friend's neighbors in the clique all have full
degree and their other external neighbors are independent, one edge
``{x, y}`` is added so that a later inversion can give ``v`` the color of
``x``.  The two other shapes keep no added edge and are inverted through an
adjacent pair ``x, y`` or through the ``{s, z}`` pair alone.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, List

import numpy as np

from ..errors import NoCandidatePair
from ..graph import Graph, max_clique
from ..structure import CRITICAL, LARGE, SMALL, core_exact, detect_solitary, friend_ks, popular_structure
from .context import Ctx, RTEntry


def step1_preprocess(ctx: Ctx) -> List[int]:
    """Remove large, critical solitary and critical ``alpha rho^2``-popular cliques."""
    k_pop = friend_ks(ctx.cfg)[2]
    out = []
    for c in ctx.cliques:
        if c.size_class == LARGE:
            out.append(c.index)
        elif c.size_class == CRITICAL and (c.solitary or c.holey):
            out.append(c.index)
        elif c.size_class == CRITICAL and c.popular.get(k_pop) is not None:
            out.append(c.index)
    ctx.removed_step1 = out
    for ci in out:
        ctx.set_active(ctx.members(ci), False)
    return out


def rt_targets(ctx: Ctx) -> List[int]:
    k2 = 2 * ctx.cfg.rho
    removed = set(ctx.removed_step1)
    out = []
    for c in ctx.cliques:
        if c.index in removed or c.size_class != CRITICAL or c.core is None:
            continue
        if len(c.core) == ctx.delta - 1 and c.friendly.get(k2):
            out.append(c.index)
    return out


def _choose_s(c, k2: int) -> int:
    friends = [x for x, _ in c.friends[k2]]
    if c.outside is not None and c.outside in friends:
        return c.outside
    return friends[0]


def step1_reed_transform(ctx: Ctx):
    """Build ``H`` in place: deactivate the removed cliques and add ``E_new``."""
    cfg = ctx.cfg
    k2 = 2 * cfg.rho
    kb = ctx.kb
    targets = rt_targets(ctx)
    rng = ctx.rng("A_RT")
    a_rt = rng.random(ctx.n) < cfg.p_RT
    ctx.record.A_RT = set(int(v) for v in np.flatnonzero(a_rt))
    entries = []
    for ci in targets:
        c = ctx.cliques[ci]
        s = _choose_s(c, k2)
        D = tuple(sorted(c.core_nbrs[s]))
        entries.append(RTEntry(clique=ci, members=c.members, core=c.core, s=s, kind="", D=D))
    # G' degrees are measured before any of the transformed cliques leave
    for e in entries:
        c = ctx.cliques[e.clique]
        mset = set(c.members)
        full = all(ctx.current_degree(u) == ctx.delta for u in e.D)
        f: Dict[int, int] = {}
        for u in e.D:
            outside = [w for w in kb.known[u] if kb.active[w] and w not in mset and w != e.s]
            if len(outside) == 1:
                f[u] = outside[0]
        e.f = f
        e.S = tuple(u for u in e.D if a_rt[u] and u in f and not a_rt[f[u]])
        if not full:
            e.kind = "lowdeg"
            continue
        adjacent_pair = None
        for u, v in combinations(e.S, 2):
            if f[u] != f[v] and kb.adjacent(f[u], f[v]):
                adjacent_pair = (u, v)
                break
        if adjacent_pair is not None:
            e.kind = "adjacent"
            e.u, e.v = adjacent_pair
            e.x, e.y = f[e.u], f[e.v]
            continue
        e.kind = "edge"
        for attempt in range(cfg.retry_cap):
            r = ctx.rng("T", e.clique, attempt)
            T = tuple(u for u, keep in zip(e.S, r.random(len(e.S)) < cfg.p_ds) if keep)
            pair = None
            for u, v in combinations(T, 2):
                x, y = f[u], f[v]
                if x != y and not ctx.in_critical_same(x, y):
                    pair = (u, v)
                    break
            if pair is not None:
                e.T = T
                e.u, e.v = pair
                e.x, e.y = f[e.u], f[e.v]
                e.attempts = attempt + 1
                break
        else:
            raise NoCandidatePair(f"no (u, v) pair in clique {e.clique} after {cfg.retry_cap} draws",
                                  step="step1-reed", clique=e.clique,
                                  witness={"S": list(e.S), "s": e.s})
    for e in entries:
        ctx.set_active(e.members, False)
        if e.kind == "edge":
            kb.add_extra_edge(e.x, e.y)
            ctx.record.E_new.append((min(e.x, e.y), max(e.x, e.y)))
    kb.use_extra = True
    ctx.record.entries = entries
    return ctx.record


# ---------------------------------------------------------------- invariants

def materialize_H(g, ctx: Ctx):
    """The transformed graph over the true adjacency (test oracle)."""
    act = ctx.kb.active
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges():
        if act[u] and act[v]:
            adj[u].add(v)
            adj[v].add(u)
    added = np.zeros(g.n, dtype=np.int64)
    for x, y in ctx.record.E_new:
        if y not in adj[x]:
            added[x] += 1
            added[y] += 1
        adj[x].add(y)
        adj[y].add(x)
    d = max((len(a) for a in adj), default=0)
    return Graph(g.n, [sorted(a) for a in adj], max(d, g.delta)), added


def check_rt_invariants(g, ctx: Ctx, exact_clique: bool = True) -> Dict[str, object]:
    """Degree bound, no ``delta``-clique, and the two structural predicates on ``H``."""
    H, added = materialize_H(g, ctx)
    delta = ctx.delta
    rho = ctx.cfg.rho
    act = ctx.kb.active
    res: Dict[str, object] = {}
    degs = np.array([len(H.adj[v]) if act[v] else 0 for v in range(H.n)])
    res["max_degree"] = int(degs.max(initial=0))
    res["degree_ok"] = res["max_degree"] <= delta
    res["added_max"] = int(added.max(initial=0))
    res["added_ok"] = res["added_max"] <= 2 * delta / rho
    if exact_clique:
        sub_vertices = [v for v in range(H.n) if act[v] and len(H.adj[v]) >= delta - 1]
        res["no_delta_clique"] = max_clique(H, sub_vertices, target=delta) is None
    # structural predicates, recomputed on H with true adjacency
    bad_sol, bad_friend = [], []
    for c in ctx.cliques:
        if not all(act[v] for v in c.members):
            continue
        mem = list(c.members)
        anti = [(a, b) for a, b in combinations(sorted(mem), 2) if b not in H.neighbor_set(a)]
        sol, _ = detect_solitary(frozenset(anti), (), SMALL)
        K = core_exact(tuple(sorted(mem)), anti) if len(mem) else ()
        kset = set(K)
        nbrs = {}
        for u in K:
            for x in H.adj[u]:
                if x not in kset and act[x]:
                    nbrs.setdefault(x, set()).add(u)
        nbrs = {x: frozenset(s) for x, s in nbrs.items()}
        friends = [x for x, s in nbrs.items() if len(s) >= delta / rho and len(s) < len(K)]
        pop = popular_structure(K, nbrs, friends) if not sol else None
        if (sol or pop is not None) and c.size > delta + 1 - rho:
            bad_sol.append(c.index)
        if len(K) == delta - 1 and friends and pop is None:
            bad_friend.append(c.index)
    res["rt2_violations"] = bad_sol
    res["rt3_violations"] = bad_friend
    res["rt2_ok"] = not bad_sol
    res["rt3_ok"] = not bad_friend
    res["ok"] = all(res[k] for k in ("degree_ok", "added_ok", "rt2_ok", "rt3_ok")) and res.get("no_delta_clique", True)
    return res


__all__ = ["step1_preprocess", "step1_reed_transform", "rt_targets", "materialize_H", "check_rt_invariants"]

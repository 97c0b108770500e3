"""Step 5: undo the Reed Transform on a total coloring of ``H``.

Each removed clique gets two same-colored pairs around its core: ``x v``
(through the added edge, or an adjacent ``x, y``) and ``s z`` with ``z`` an
anti-neighbor of the friend ``s``.  Pairs that overlap are merged into
independent sets colored at once.
"""
from __future__ import annotations

from typing import Dict, List

from ..errors import IndependenceSearchFailed, ListExhausted, SlackWitnessMissing
from .common import common_free, greedy_color, provenance_for, same_color
from .critical import critical_extend, find_slack_witness
from .serene import KNOWN


def _anti_in_core(ctx, e, w) -> List[int]:
    c = ctx.cliques[e.clique]
    nbrs = c.core_nbrs.get(w, frozenset())
    return sorted(u for u in c.core if u not in nbrs and u != w)


def _group(ctx, w, zs: Dict[int, int], entries) -> List[int]:
    zset = set(zs.values())
    out = [w] + sorted(zset)
    for e in entries:
        if e.v is not None and (e.x == w or e.x in zset):
            out.append(e.v)
    return out


def _independent(ctx, group) -> bool:
    kb = ctx.kb
    for i, a in enumerate(group):
        for b in group[i + 1:]:
            if a == b or kb.adjacent(a, b):
                return False
    return True


def select_z_vertices(ctx, entries) -> Dict[int, Dict[int, int]]:
    """Per friend ``w``: ``{clique: z}`` with ``I(w)`` independent."""
    cfg = ctx.cfg
    by_s: Dict[int, list] = {}
    for e in entries:
        by_s.setdefault(e.s, []).append(e)
    x_of: Dict[int, list] = {}
    for e in entries:
        if e.x is not None:
            x_of.setdefault(e.x, []).append(e)
    out: Dict[int, Dict[int, int]] = {}
    for w in sorted(by_s):
        mine = by_s[w]
        cand = {e.clique: _anti_in_core(ctx, e, w) for e in mine}
        if any(not v for v in cand.values()):
            bad = [ci for ci, v in cand.items() if not v]
            raise IndependenceSearchFailed(f"friend {w} has no core anti-neighbor", step="step5-z",
                                           clique=bad[0], witness={"w": w})
        inside = len(mine) == 1 and w in ctx.cliques[mine[0].clique].members
        if inside:
            e = mine[0]
            for z in cand[e.clique]:
                zs = {e.clique: z}
                if _independent(ctx, _group(ctx, w, zs, entries)):
                    out[w] = zs
                    break
            else:
                raise IndependenceSearchFailed(f"no independent I({w})", step="step5-z",
                                               clique=e.clique, witness={"w": w})
            continue
        pool = sorted(set(u for v in cand.values() for u in v))
        for attempt in range(cfg.retry_cap):
            r = ctx.rng("Z", w, attempt).random(len(pool)) < cfg.p_z
            R = {u for u, k in zip(pool, r) if k}
            zs = {}
            for e in mine:
                c = ctx.cliques[e.clique]
                for u in cand[e.clique]:
                    if u not in R:
                        continue
                    ext = c.ext.get(u, frozenset())
                    if ext & R:
                        continue
                    if any(ee.v is not None and ee.f.get(ee.v) in R for ee in x_of.get(u, ())):
                        continue
                    zs[e.clique] = u
                    break
            if len(zs) == len(mine) and _independent(ctx, _group(ctx, w, zs, entries)):
                out[w] = zs
                break
        else:
            raise IndependenceSearchFailed(f"sampling found no independent I({w})", step="step5-z",
                                           clique=mine[0].clique, witness={"w": w, "cliques": [e.clique for e in mine]})
    return out


def _assign_copy(ctx, v, c, step):
    prov = provenance_for(ctx, v, c, 5)
    if prov is None:
        raise ListExhausted(f"vertex {v} cannot take color {c}", step=step, witness={"vertex": v, "color": c})
    ctx.phi.assign(v, c, prov, step)


def step5_inverse_reed(ctx) -> dict:
    rec = ctx.record
    entries = rec.entries
    phi = ctx.phi
    kb = ctx.kb
    if not entries:
        return {}
    S = sorted({e.s for e in entries})
    # (1) uncolor the friends and put the removed cliques back
    for s in S:
        phi.unassign(s)
    for e in entries:
        ctx.set_active(e.members, True)
    kb.use_extra = False
    zsel = select_z_vertices(ctx, entries)
    Z = {z for zs in zsel.values() for z in zs.values()}
    # (2) copy the color of x onto v
    for e in entries:
        if e.v is not None and phi.colored(e.x):
            _assign_copy(ctx, e.v, int(phi.color[e.x]), "step5-copy")
    # (3) the contracted sets I(w), greedily from L5(w)
    groups = {w: _group(ctx, w, zsel[w], entries) for w in S}
    for w in S:
        groups[w] = [v for v in groups[w] if not phi.colored(v) or v == w]
    slack = {}
    for w in S:
        L = len(common_free(ctx, groups[w]))
        gset = set(groups[w])
        deg = 0
        for w2 in S:
            if w2 == w:
                continue
            if any(kb.adjacent(a, b) for a in gset for b in groups[w2]):
                deg += 1
        slack[w] = L - deg
    need = ctx.delta / (4 * ctx.cfg.rho)
    low = {w: s for w, s in slack.items() if s < need}
    ctx.diagnostics["q1_slack"] = {"min": min(slack.values()) if slack else None,
                                   "target": need, "below": len(low)}
    if low and ctx.cfg.strict_q1_slack:
        w = min(low)
        raise SlackWitnessMissing(f"contracted set I({w}) has slack {low[w]} < {need}", step="step5-q1",
                                  witness={"w": w, "slack": low[w]})
    for w in S:
        grp = [v for v in groups[w] if not phi.colored(v)]
        same_color(ctx, grp, w, 5, "step5-q1")
    # (4) remaining x v groups
    rest: Dict[int, list] = {}
    for e in entries:
        if e.v is not None and not phi.colored(e.v):
            rest.setdefault(e.x, []).append(e.v)
    for x in sorted(rest):
        grp = ([x] if not phi.colored(x) else []) + sorted(rest[x])
        if phi.colored(x):
            for v in grp:
                _assign_copy(ctx, v, int(phi.color[x]), "step5-xv")
            continue
        cands = common_free(ctx, grp)
        same_color(ctx, grp, x, 5, "step5-xv", candidates=cands)
    # extend into every removed clique
    for e in entries:
        c = ctx.cliques[e.clique]
        w = find_slack_witness(ctx, c.members, c.core)
        if w is None:
            raise SlackWitnessMissing(f"no slack pair in transformed clique {e.clique}", step="step5-extend",
                                      clique=e.clique, witness={"s": e.s})
        critical_extend(ctx, c.members, c.core, w[0], w[1], "step5-extend", e.clique, s_list=5)
        ctx.attribution[str(e.clique)] = f"step5-{e.kind}"
    return {"z": {str(w): {str(k): v for k, v in zs.items()} for w, zs in zsel.items()}, "slack": slack}


__all__ = ["select_z_vertices", "step5_inverse_reed"]

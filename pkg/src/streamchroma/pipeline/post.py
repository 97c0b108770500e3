"""Step 6: the cliques set aside before the Reed Transform."""
from __future__ import annotations

from ..errors import ListExhausted, RecoveryIncomplete
from ..structure import friend_ks
from .common import common_free, greedy_color, list_color, provenance_for, same_color
from .serene import KNOWN
from .small import match_clique


def _pair_with_friend(ctx, x, z, forbid, step, ci):
    """Same-color friend ``x`` with core vertex ``z`` from ``L6(x)``; keep the
    current color of ``x`` when ``z`` can take it."""
    phi = ctx.phi
    if phi.colored(x):
        c = int(phi.color[x])
        if c not in forbid and c not in phi.neighbor_colors(z) and provenance_for(ctx, z, c, 6) is not None:
            phi.assign(z, c, provenance_for(ctx, z, c, 6), step)
            return c
        phi.unassign(x)
    return same_color(ctx, [x, z], x, 6, step, ci, forbid=forbid)


def step6_color_popular(ctx, ci: int) -> None:
    c = ctx.cliques[ci]
    phi = ctx.phi
    step = "step6-popular"
    pop = c.popular[friend_ks(ctx.cfg)[2]]
    x1, x2, w, z1, z2 = (pop[k] for k in ("x1", "x2", "w", "z1", "z2"))
    for v in c.members:
        phi.unassign(v)
    s = c.outside
    if s is not None and s not in (x1, x2):
        list_color(ctx, s, 6, step, ci)
    c1 = _pair_with_friend(ctx, x1, z1, (), step, ci)
    _pair_with_friend(ctx, x2, z2, (c1,), step, ci)
    for v in sorted(c.core):
        if v != w and not phi.colored(v):
            greedy_color(ctx, v, 6, step, ci)
    greedy_color(ctx, w, 6, step, ci)


def step6_color_solitary(ctx, ci: int) -> None:
    c = ctx.cliques[ci]
    phi = ctx.phi
    kb = ctx.kb
    if c.holey:
        match_clique(ctx, ci, 6, "step6-holey", uncolor=True)
        return
    step = "step6-solitary"
    h = c.helper
    if h is None:
        raise RecoveryIncomplete(f"solitary clique {ci} has no helper", step=step, clique=ci)
    for v in c.members:
        phi.unassign(v)
    if h["kind"] == "anti_matching":
        used = []
        helpers = []
        for known, other in h["pairs"]:
            used.append(same_color(ctx, [other, known], other, 6, step, ci, forbid=used))
            helpers += [known, other]
    else:
        other = h["other"]
        helpers = list(h["known"]) + [other]
        same_color(ctx, [other] + list(h["known"]), other, 6, step, ci)
    S = sorted(v for v in c.members
               if not phi.colored(v) and (c.anti_neighbors(v) or not kb.is_known(v)))
    for v in S:
        list_color(ctx, v, 6, step, ci)
    common = None
    for hv in helpers:
        nb = kb.visible(hv)
        common = set(nb) if common is None else common & nb
    rest = [v for v in sorted(c.members) if not phi.colored(v)]
    for v in [v for v in rest if v not in common] + [v for v in rest if v in common]:
        greedy_color(ctx, v, 6, step, ci)


def step6_post(ctx) -> None:
    k_pop = friend_ks(ctx.cfg)[2]
    for ci in ctx.removed_step1:
        c = ctx.cliques[ci]
        ctx.set_active(c.members, True)
    for ci in ctx.removed_step1:
        c = ctx.cliques[ci]
        if not c.solitary and not c.holey and c.popular.get(k_pop) is not None:
            step6_color_popular(ctx, ci)
            ctx.attribution[str(ci)] = "step6-popular"
        else:
            step6_color_solitary(ctx, ci)
            ctx.attribution[str(ci)] = "step6-holey" if c.holey else "step6-solitary"


__all__ = ["step6_color_popular", "step6_color_solitary", "step6_post"]

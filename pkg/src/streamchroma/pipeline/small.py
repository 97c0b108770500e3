"""Step 4: sparse vertices, then small almost-cliques (holey ones last)."""
from __future__ import annotations

from ..errors import MatchingFailed
from ..structure import SMALL
from .common import list_color, provenance_for
from .matching import build_palette_graph, find_L_perfect_matching
from .serene import KNOWN


def step4_color_sparse(ctx) -> int:
    act = ctx.kb.active
    done = 0
    for v in ctx.summary.decomposition.sparse:
        v = int(v)
        if act[v] and not ctx.phi.colored(v):
            list_color(ctx, v, 4, "step4-sparse")
            done += 1
    return done


def _widened(ctx, members, list_id):
    """Palette graph where recovered vertices may use any available color."""
    pg = build_palette_graph(members, ctx.phi)
    narrow = build_palette_graph(members, ctx.phi, list_id)
    adj = [full if ctx.kb.is_known(v) else nar for v, full, nar in zip(pg.left, pg.adj, narrow.adj)]
    pg.adj = adj
    return pg


def match_clique(ctx, ci: int, list_id: int, step: str, uncolor: bool = False) -> str:
    """Extend the coloring to a clique by an ``L``-perfect matching.

    The sampled palette graph is tried first; when it has no perfect
    matching, recovered vertices fall back to their full availability.
    Returns which graph succeeded.
    """
    phi = ctx.phi
    members = ctx.members(ci)
    if uncolor:
        for v in members:
            phi.unassign(v)
    route = "sampled"
    m = find_L_perfect_matching(build_palette_graph(members, phi, list_id))
    if m is None:
        route = "widened"
        m = find_L_perfect_matching(_widened(ctx, members, list_id))
    if m is None:
        left = [int(v) for v in members if not phi.colored(v)]
        raise MatchingFailed(f"palette graph of clique {ci} has no perfect matching", step=step,
                             clique=ci, witness={"uncolored": left})
    for v, c in sorted(m.items()):
        if ctx.kb.palettes.contains(list_id, v, c):
            prov = list_id
        else:
            prov = provenance_for(ctx, v, c, list_id)
        phi.assign(v, c, prov if prov is not None else KNOWN, step)
    return route


def step4_color_small(ctx) -> dict:
    act = ctx.kb.active
    small = [c for c in ctx.cliques if c.size_class == SMALL and all(act[v] for v in c.members)]
    routes = {}
    for c in sorted(small, key=lambda c: (c.holey, c.index)):
        step = "step4-holey" if c.holey else "step4-small"
        routes[c.index] = match_clique(ctx, c.index, 4, step, uncolor=c.holey)
        ctx.attribution[str(c.index)] = step
    ctx.diagnostics["step4"] = {"small": len(small),
                                "widened": sum(1 for r in routes.values() if r == "widened")}
    return routes


__all__ = ["step4_color_sparse", "step4_color_small", "match_clique"]

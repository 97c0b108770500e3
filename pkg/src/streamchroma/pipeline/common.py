"""Coloring moves shared by the pipeline steps."""
from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

from ..errors import ListExhausted
from .serene import KNOWN

LIST_ORDER = (3, 4, 5, 6)


def list_holding(ctx, v: int, c: int, prefer: int) -> Optional[int]:
    """A list of ``v`` containing ``c``, trying ``prefer`` first."""
    pal = ctx.kb.palettes
    for i in (prefer,) + tuple(i for i in LIST_ORDER if i != prefer):
        if pal.contains(i, v, c):
            return i
    return None


def provenance_for(ctx, v: int, c: int, prefer: int) -> Optional[int]:
    """How ``v`` may serenely take ``c``: known neighborhood, else a list."""
    if ctx.kb.is_known(v):
        return KNOWN
    return list_holding(ctx, v, c, prefer)


def greedy_color(ctx, v: int, list_id: int, step: str, clique=None) -> int:
    """Smallest free color for a known vertex, else the first free color of
    its lists (``list_id`` first)."""
    phi = ctx.phi
    if ctx.kb.is_known(v):
        free = phi.free_colors(v)
        if free:
            phi.assign(v, free[0], KNOWN, step)
            return free[0]
        raise ListExhausted(f"no free color for vertex {v}", step=step, clique=clique,
                            witness={"vertex": v})
    return list_color(ctx, v, list_id, step, clique, fallback=True)


def list_color(ctx, v: int, list_id: int, step: str, clique=None, fallback: bool = False,
               forbid: Iterable[int] = ()) -> int:
    phi = ctx.phi
    ids = (list_id,) + (tuple(i for i in LIST_ORDER if i != list_id) if fallback else ())
    for i in ids:
        c = phi.first_list_color(v, i, forbid)
        if c is not None:
            phi.assign(v, c, i, step)
            return c
    raise ListExhausted(f"L{list_id}({v}) has no available color", step=step, clique=clique,
                        witness={"vertex": v, "list": list_id})


def common_free(ctx, group: Sequence[int], forbid: Iterable[int] = ()) -> List[int]:
    phi = ctx.phi
    blocked = set(forbid)
    for v in group:
        blocked |= phi.neighbor_colors(v)
    return [c for c in range(1, ctx.q + 1) if c not in blocked]


def same_color(ctx, group: Sequence[int], owner: int, list_id: int, step: str, clique=None,
               forbid: Iterable[int] = (), candidates: Optional[Sequence[int]] = None) -> int:
    """Give one color to the independent set ``group``.

    The color comes from ``L_list_id(owner)`` (or from ``candidates``); every
    other member must be able to take it serenely.
    """
    pal = ctx.kb.palettes
    free = set(common_free(ctx, group, forbid))
    pool = candidates if candidates is not None else [int(c) for c in pal.get(list_id, owner)]
    for c in pool:
        if c not in free:
            continue
        provs = {}
        for v in group:
            p = list_id if (v == owner and candidates is None) else provenance_for(ctx, v, c, list_id)
            if p is None:
                break
            provs[v] = p
        else:
            for v in group:
                ctx.phi.assign(v, c, provs[v], step)
            return c
    raise ListExhausted(f"no shared color for {sorted(group)}", step=step, clique=clique,
                        witness={"group": sorted(int(v) for v in group), "owner": owner, "list": list_id})


__all__ = ["greedy_color", "list_color", "same_color", "common_free", "provenance_for", "list_holding"]

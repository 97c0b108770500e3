"""Step 3: color the critical almost-cliques of ``H``.

A clique is finished greedily once two adjacent uncolored core vertices
``u, v`` carry one and two units of slack against the rest of the clique.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from ..errors import SlackWitnessMissing
from ..structure import CRITICAL
from .common import greedy_color, list_color, same_color


def _slack(ctx, v: int, scope: set) -> int:
    phi = ctx.phi
    return len(phi.free_colors(v)) - phi.uncolored_neighbors(v, scope)


def find_slack_witness(ctx, members: Sequence[int], core: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Scan the core for ``(u, v)``: free colors of ``u`` at least its uncolored
    degree in the clique, and one more for ``v``."""
    phi = ctx.phi
    kb = ctx.kb
    scope = set(members)
    scored = []
    for w in sorted(core):
        if phi.colored(w) or not kb.is_known(w):
            continue
        scored.append((_slack(ctx, w, scope), w))
    if len(scored) < 2:
        return None
    scored.sort(key=lambda t: (-t[0], t[1]))
    (sv, v), (su, u) = scored[0], scored[1]
    if sv >= 1 and su >= 0:
        return u, v
    return None


def critical_extend(ctx, members: Sequence[int], core: Sequence[int], u: int, v: int,
                    step: str, clique=None, s_list: int = 3) -> None:
    """Color the clique in the order: outside vertex, vertices missing ``u`` or
    ``v``, the rest, then ``u`` and ``v``."""
    phi = ctx.phi
    kb = ctx.kb
    kset = set(core)
    outside = [w for w in sorted(members) if w not in kset and not phi.colored(w)]
    for s in outside:
        list_color(ctx, s, s_list, step, clique)
    common = kb.visible(u) & kb.visible(v)
    rest = [w for w in sorted(members) if w not in (u, v) and not phi.colored(w)]
    first = [w for w in rest if w not in common]
    second = [w for w in rest if w in common]
    for w in first + second + [u, v]:
        greedy_color(ctx, w, s_list, step, clique)


def external_degree(ctx, s: int, members) -> int:
    mset = set(members)
    act = ctx.kb.active
    return sum(1 for x in ctx.kb.visible(s) if act[x] and x not in mset)


def critical_in_H(ctx) -> List[int]:
    act = ctx.kb.active
    return [c.index for c in ctx.cliques
            if c.size_class == CRITICAL and c.core is not None and all(act[v] for v in c.members)]


def _extend_or_fail(ctx, c, step):
    w = find_slack_witness(ctx, c.members, c.core)
    if w is None:
        raise SlackWitnessMissing(f"no slack pair in clique {c.index}", step=step, clique=c.index,
                                  witness={"uncolored": [int(v) for v in c.members if not ctx.phi.colored(v)]})
    critical_extend(ctx, c.members, c.core, w[0], w[1], step, c.index)


def step3_color_critical(ctx) -> dict:
    rho = ctx.cfg.rho
    phi = ctx.phi
    J1, J2 = [], []
    for ci in critical_in_H(ctx):
        c = ctx.cliques[ci]
        s = c.outside
        if s is None or phi.colored(s) or external_degree(ctx, s, c.members) < 2 * rho:
            J1.append(ci)
        else:
            J2.append(ci)
    for ci in J1:
        _extend_or_fail(ctx, ctx.cliques[ci], "step3-stage1")
        ctx.attribution[str(ci)] = "step3-stage1"
    for ci in J2:
        c = ctx.cliques[ci]
        s = c.outside
        anti = sorted(z for z in c.core if s in c.anti.get(z, ()) and not phi.colored(z) and ctx.kb.is_known(z))
        if not anti:
            raise SlackWitnessMissing(f"outside vertex {s} has no uncolored anti-neighbor", step="step3-stage2",
                                      clique=ci, witness={"s": s})
        same_color(ctx, [s, anti[0]], s, 3, "step3-stage2", ci)
        _extend_or_fail(ctx, c, "step3-stage2")
        ctx.attribution[str(ci)] = "step3-stage2"
    ctx.diagnostics["step3"] = {"stage1": len(J1), "stage2": len(J2)}
    return {"J1": J1, "J2": J2}


__all__ = ["find_slack_witness", "critical_extend", "step3_color_critical", "critical_in_H"]

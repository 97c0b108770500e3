"""Step 2: one round of random color trials on ``H``."""
from __future__ import annotations

import numpy as np


def keep_mask(eu, ev, trial, colors):
    """Which trying vertices keep their color.

    ``trial`` and ``colors`` are ``(batch, n)``; a vertex keeps its color when
    no neighbor along ``(eu, ev)`` tried the same one in the same row.
    """
    trial = np.atleast_2d(trial)
    colors = np.atleast_2d(colors)
    bad = np.zeros(trial.shape, dtype=bool)
    if len(eu):
        clash = trial[:, eu] & trial[:, ev] & (colors[:, eu] == colors[:, ev])
        rows, idx = np.nonzero(clash)
        bad[rows, eu[idx]] = True
        bad[rows, ev[idx]] = True
    return trial & ~bad


def step2_slack_generation(ctx) -> int:
    """Activated vertices try their ``L2`` color and keep it when no active
    neighbor tried the same one.

    Two neighbors trying one color share a list color, so their edge is in
    the sparsified graph; added edges of ``H`` are checked as well.
    """
    kb = ctx.kb
    act = kb.active
    r = ctx.rng("A_SG").random(ctx.n)
    trial = (r < ctx.cfg.p_SG) & act
    L2 = kb.palettes.L2
    eu, ev = [], []
    for v in np.flatnonzero(trial):
        v = int(v)
        nb = kb.sp[v] | kb.extra.get(v, set()) if kb.use_extra else kb.sp[v]
        for u in nb:
            if u > v and trial[u]:
                eu.append(v)
                ev.append(u)
    kept = np.flatnonzero(keep_mask(np.asarray(eu, dtype=np.int64), np.asarray(ev, dtype=np.int64),
                                    trial, L2)[0])
    for v in kept:
        ctx.phi.assign(int(v), int(L2[v]), 2, "step2")
    ctx.diagnostics["step2"] = {"activated": int(trial.sum()), "kept": len(kept)}
    return len(kept)


__all__ = ["keep_mask", "step2_slack_generation"]

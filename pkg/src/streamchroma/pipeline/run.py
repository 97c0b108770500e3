"""Run Steps 1 to 6 on a stream summary."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ..errors import BudgetExceeded, PipelineFailure
from ..graph import Graph
from ..oracles import exact_color
from .context import Ctx
from .critical import step3_color_critical
from .inverse import step5_inverse_reed
from .post import step6_post
from .reed import step1_preprocess, step1_reed_transform
from .serene import check_serene
from .slack import step2_slack_generation
from .small import step4_color_small, step4_color_sparse


@dataclass
class PipelineResult:
    colors: np.ndarray
    q: int
    attribution: Dict[str, str]
    diagnostics: Dict[str, object]
    ctx: Optional[Ctx] = field(default=None, repr=False)
    fallback: bool = False
    certificate: Optional[dict] = None

    status = "colored"

    @property
    def complete(self) -> bool:
        return True

    def attribution_text(self) -> str:
        return "".join(f"clique {k} {v}\n" for k, v in sorted(self.attribution.items(), key=lambda t: int(t[0])))


@dataclass
class FallbackUnsat:
    """No ``(delta-1)``-coloring exists on the stored graph; ``best_q`` is the
    smallest palette the exact search could fill."""

    q: int
    best_q: Optional[int]
    colors: Optional[np.ndarray]
    certificate: dict
    status = "fallback-unsat"

    @property
    def complete(self) -> bool:
        return False


@dataclass
class IncompleteReport:
    failure: dict
    partial: np.ndarray
    q: int
    attribution: Dict[str, str]
    diagnostics: Dict[str, object]
    status = "incomplete"

    @property
    def complete(self) -> bool:
        return False

    def text(self) -> str:
        body = {"status": self.status, "failure": self.failure,
                "colored": int(np.count_nonzero(self.partial)), "n": int(len(self.partial))}
        return json.dumps(body, sort_keys=True, indent=1, default=_jsonable)


def _jsonable(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o)
    return str(o)


def run_fallback(summary, budget: int = 5_000_000):
    """Exact search on the stored graph for small ``delta``."""
    g = Graph.from_edges(summary.n, summary.stored, delta=summary.delta)
    q = max(summary.delta - 1, 1)
    try:
        res = exact_color(g, q, budget)
    except BudgetExceeded as exc:
        return FallbackUnsat(q, None, None, {"reason": "budget", "message": str(exc)})
    if res.sat:
        return PipelineResult(res.colors, q, {}, {"nodes": res.nodes}, fallback=True)
    best = q + 1
    while best <= summary.delta + 1:
        try:
            r2 = exact_color(g, best, budget)
        except BudgetExceeded:
            r2 = None
        if r2 is not None and r2.sat:
            return FallbackUnsat(q, best, r2.colors, res.certificate)
        best += 1
    return FallbackUnsat(q, None, None, res.certificate)


def run_pipeline(summary, cfg=None):
    """Color the summarized graph with ``delta - 1`` colors.

    Returns a :class:`PipelineResult`, a :class:`FallbackUnsat`, or an
    :class:`IncompleteReport` naming the step and the witness of a failed
    high-probability event.  Never returns an improper partial coloring as
    complete.
    """
    if summary.fallback:
        return run_fallback(summary)
    ctx = Ctx(summary)
    try:
        step1_preprocess(ctx)
        step1_reed_transform(ctx)
        step2_slack_generation(ctx)
        step3_color_critical(ctx)
        step4_color_sparse(ctx)
        step4_color_small(ctx)
        step5_inverse_reed(ctx)
        step6_post(ctx)
        missing = np.flatnonzero(ctx.phi.color == 0)
        if len(missing):
            raise PipelineFailure(f"{len(missing)} vertices left uncolored", step="final",
                                  witness={"vertices": [int(v) for v in missing[:20]]})
        ok, why = check_serene(ctx.phi, summary)
        if not ok:
            raise PipelineFailure("serene check failed", step="final", witness=why)
    except PipelineFailure as exc:
        return IncompleteReport(exc.as_dict(), ctx.phi.color.copy(), ctx.q, dict(ctx.attribution),
                                dict(ctx.diagnostics))
    ctx.diagnostics["rt"] = {"removed": ctx.record.removed, "E_new": ctx.record.E_new,
                             "kinds": [e.kind for e in ctx.record.entries]}
    return PipelineResult(ctx.phi.color.copy(), ctx.q, dict(ctx.attribution), dict(ctx.diagnostics), ctx)


__all__ = ["run_pipeline", "run_fallback", "PipelineResult", "IncompleteReport", "FallbackUnsat"]

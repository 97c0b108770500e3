"""scikit-learn style wrapper around the pass and the coloring pipeline."""
from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .config import RunConfig
from .errors import PipelineFailure
from .graph import EdgeStream, verify_coloring
from .validation import check_delta, check_edges


class IncompleteColoring(RuntimeError):
    """Raised by :meth:`StreamingColorer.fit` when no verified coloring came out."""

    def __init__(self, status, report):
        super().__init__(f"coloring {status}: {report}")
        self.status = status
        self.report = report


class StreamingColorer(BaseEstimator):
    """Color a graph given as an edge list with ``delta - 1`` colors in one pass.

    ``fit`` streams the edges in the given order, builds the summary and runs
    the pipeline.  The result is verified against the edges before it is
    exposed as ``colors_``.

    Parameters
    ----------
    delta : int or None
        Degree bound announced in the stream header; the observed maximum
        degree when None.
    n_vertices : int or None
        Number of vertices; one more than the largest id when None.
    mode, seed, rho, epsilon, acd_mode :
        Forwarded to :class:`~streamchroma.config.RunConfig`.
    allow_incomplete : bool
        Keep a partial coloring instead of raising when the pipeline stops.
    """

    def __init__(self, delta: Optional[int] = None, n_vertices: Optional[int] = None, mode: str = "desk",
                 seed: int = 0, rho: Optional[int] = None, epsilon: Optional[float] = None,
                 acd_mode: str = "estimate", allow_incomplete: bool = False):
        self.delta = delta
        self.n_vertices = n_vertices
        self.mode = mode
        self.seed = seed
        self.rho = rho
        self.epsilon = epsilon
        self.acd_mode = acd_mode
        self.allow_incomplete = allow_incomplete

    def _config(self) -> RunConfig:
        return RunConfig(mode=self.mode, seed=self.seed, acd_mode=self.acd_mode).with_overrides(
            rho=self.rho, epsilon=self.epsilon)

    def fit(self, X, y=None):
        from .graph import Graph
        from .pipeline import run_pipeline
        from .stream import run_pass

        n, edges = check_edges(X, self.n_vertices)
        delta = check_delta(self.delta, n, edges)
        g = Graph.from_edges(n, map(tuple, edges), delta=delta)
        cfg = self._config()
        self.n_vertices_, self.delta_ = n, delta
        oracle = g if self.acd_mode == "oracle" else None
        try:
            summary = run_pass(EdgeStream(n, delta, [tuple(map(int, e)) for e in edges]), cfg, oracle)
            res = run_pipeline(summary)
        except PipelineFailure as exc:
            res = None
            self.status_, self.report_ = "incomplete", exc.as_dict()
            partial = np.zeros(n, dtype=np.int64)
        else:
            self.status_ = res.status
            self.report_ = getattr(res, "failure", None) or getattr(res, "certificate", None)
            partial = res.colors if res.colors is not None else np.zeros(n, dtype=np.int64)
        self.q_ = max(delta - 1, 1)
        if self.status_ == "colored":
            rep = verify_coloring(g, res.colors, self.q_)
            if not rep.ok:
                # never expose an unverified coloring as complete
                self.status_, self.report_ = "unverified", str(rep)
            else:
                self.attribution_ = dict(res.attribution)
        self.space_ = summary.space.as_dict() if res is not None else None
        if self.status_ != "colored":
            if not self.allow_incomplete:
                raise IncompleteColoring(self.status_, self.report_)
            self.colors_ = np.asarray(partial, dtype=np.int64)
        else:
            self.colors_ = np.asarray(res.colors, dtype=np.int64)
        self.n_colors_ = int(len(np.unique(self.colors_[self.colors_ > 0])))
        return self

    def predict(self, X=None):
        """Colors of the fitted graph; ``X``, when given, must be the fitted edges."""
        if not hasattr(self, "colors_"):
            raise NotFittedError("call fit before predict")
        if X is not None:
            n, _ = check_edges(X, self.n_vertices)
            if n != self.n_vertices_:
                raise ValueError("predict only colors the graph seen by fit")
        return self.colors_.copy()

    def fit_predict(self, X, y=None):
        return self.fit(X).predict()


__all__ = ["StreamingColorer", "IncompleteColoring"]

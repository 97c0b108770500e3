"""Input checks shared by the estimator and the command line."""
from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .errors import SelfLoop, VertexOutOfRange
from .graph import EdgeStream, Graph


def check_edges(X, n_vertices: Optional[int] = None) -> Tuple[int, np.ndarray]:
    """Return ``(n, edges)`` with ``edges`` an ``(m, 2)`` int64 array.

    ``X`` may be a :class:`Graph`, an :class:`EdgeStream` or anything
    array-like of shape ``(m, 2)``.  Self-loops and out-of-range ids raise.
    """
    if isinstance(X, Graph):
        return X.n, X.edge_array().astype(np.int64).reshape(-1, 2)
    if isinstance(X, EdgeStream):
        return X.n, np.asarray(list(X.body), dtype=np.int64).reshape(-1, 2)
    arr = np.asarray(X)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (m, 2) edge array, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.mod(arr, 1) == 0):
            raise ValueError("edge endpoints must be integers")
    arr = arr.astype(np.int64)
    if len(arr) and arr.min() < 0:
        raise VertexOutOfRange("negative vertex id")
    n = int(arr.max()) + 1 if len(arr) else 0
    if n_vertices is not None:
        if n > n_vertices:
            raise VertexOutOfRange(f"vertex {n - 1} outside 0..{n_vertices - 1}")
        n = int(n_vertices)
    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        raise SelfLoop(f"self-loop at vertex {int(arr[loops][0, 0])}")
    return n, arr


def max_degree_of(n: int, edges: np.ndarray) -> int:
    if len(edges) == 0:
        return 0
    return int(np.bincount(edges.ravel(), minlength=n).max())


def check_delta(delta: Optional[int], n: int, edges: np.ndarray) -> int:
    """The stream's degree bound; defaults to the observed maximum degree."""
    observed = max_degree_of(n, edges)
    if delta is None:
        return observed
    delta = int(delta)
    if delta < observed:
        raise ValueError(f"delta={delta} is below the observed maximum degree {observed}")
    return delta


def check_coloring(colors, n: int) -> np.ndarray:
    col = np.asarray(colors)
    if col.shape != (n,):
        raise ValueError(f"coloring has shape {col.shape}, expected ({n},)")
    if not np.issubdtype(col.dtype, np.integer):
        raise ValueError("colors must be integers")
    if len(col) and col.min() < 0:
        raise ValueError("colors must be non-negative (0 means uncolored)")
    return col.astype(np.int64)


__all__ = ["check_edges", "check_delta", "check_coloring", "max_degree_of"]

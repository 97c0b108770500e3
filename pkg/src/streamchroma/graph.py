"""Graphs, edge streams, partial colorings and their verification.

Vertices are dense 0-based integers.  The on-disk edge stream is a text file
whose first line is ``"n delta"`` followed by one ``"u v"`` line per edge.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import (
    BudgetExceeded,
    DuplicateEdge,
    MalformedHeader,
    SelfLoop,
    VertexOutOfRange,
)

UNCOLORED = 0


class Graph:
    """Simple undirected graph with sorted adjacency lists.

    Parameters
    ----------
    n : int
        Number of vertices.
    adjacency : sequence of sequences
        ``adjacency[v]`` lists the neighbors of ``v``.
    delta : int, optional
        Declared maximum degree; defaults to the observed one.
    """

    __slots__ = ("n", "adj", "delta", "_sets", "_m")

    def __init__(self, n: int, adjacency, delta: Optional[int] = None):
        self.n = int(n)
        self.adj = tuple(tuple(sorted(a)) for a in adjacency)
        if len(self.adj) != self.n:
            raise ValueError("adjacency must have one entry per vertex")
        self._sets = None
        self._m = None
        observed = max((len(a) for a in self.adj), default=0)
        self.delta = observed if delta is None else int(delta)
        if observed > self.delta:
            raise ValueError(f"max degree {observed} exceeds declared delta {self.delta}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, delta: Optional[int] = None,
                   check_duplicates: bool = True) -> "Graph":
        adj = [[] for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise SelfLoop(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u}, {v}) outside [0, {n})")
            adj[u].append(v)
            adj[v].append(u)
        if check_duplicates:
            # sorted-merge duplicate detection
            for v, a in enumerate(adj):
                a.sort()
                for i in range(1, len(a)):
                    if a[i] == a[i - 1]:
                        raise DuplicateEdge(f"edge ({v}, {a[i]}) appears twice")
        return cls(n, adj, delta)

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def neighbor_set(self, v: int) -> frozenset:
        if self._sets is None:
            self._sets = [frozenset(a) for a in self.adj]
        return self._sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_set(u)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def m(self) -> int:
        if self._m is None:
            self._m = sum(len(a) for a in self.adj) // 2
        return self._m

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edges(self) -> Iterator[tuple]:
        for u, a in enumerate(self.adj):
            for v in a:
                if u < v:
                    yield (u, v)

    def edge_array(self) -> np.ndarray:
        e = list(self.edges())
        return np.asarray(e, dtype=np.int64).reshape(-1, 2)

    def induced_edges(self, vertices) -> list:
        vs = set(vertices)
        return [(u, v) for u in sorted(vs) for v in self.adj[u] if u < v and v in vs]

    def with_delta(self, delta: int) -> "Graph":
        return Graph(self.n, self.adj, delta)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, delta={self.delta})"


@dataclass(frozen=True)
class EdgeStream:
    """Header plus a once-only iterable of edges."""

    n: int
    delta: int
    body: Iterable = field(repr=False)

    def __iter__(self):
        return iter(self.body)

    @classmethod
    def from_graph(cls, g: Graph, order=None) -> "EdgeStream":
        edges = list(g.edges())
        if order is not None:
            edges = [edges[i] for i in order]
        return cls(g.n, g.delta, edges)


def _parse_header(line: str):
    parts = line.split()
    if len(parts) != 2:
        raise MalformedHeader(f"expected 'n delta', got {line!r}")
    try:
        n, delta = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise MalformedHeader(f"non-integer header {line!r}") from exc
    if n < 0 or delta < 0:
        raise MalformedHeader(f"negative header value in {line!r}")
    return n, delta


def _edge_lines(lines, n, check_duplicates):
    seen = set() if check_duplicates else None
    for lineno, line in enumerate(lines, start=2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 2:
            raise MalformedHeader(f"line {lineno}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise SelfLoop(f"line {lineno}: self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"line {lineno}: ({u}, {v}) outside [0, {n})")
        if seen is not None:
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdge(f"line {lineno}: duplicate edge {key}")
            seen.add(key)
        yield (u, v)


def read_edge_stream(source, check_duplicates: bool = False) -> EdgeStream:
    """Open an edge stream lazily.

    ``source`` is a path, a text stream or a binary stream.  The body is read
    line by line while the caller iterates; it is never buffered.
    """
    if isinstance(source, (str, os.PathLike)):
        fh = open(source, "r", encoding="ascii")
    elif isinstance(source, io.TextIOBase):
        fh = source
    else:
        fh = io.TextIOWrapper(source, encoding="ascii")
    header = fh.readline()
    if not header.strip():
        raise MalformedHeader("missing header line")
    n, delta = _parse_header(header)
    return EdgeStream(n, delta, _edge_lines(fh, n, check_duplicates))


def write_edge_stream(dest, n: int, delta: int, edges: Iterable) -> None:
    own = isinstance(dest, (str, os.PathLike))
    fh = open(dest, "w", encoding="ascii", newline="\n") if own else dest
    try:
        fh.write(f"{n} {delta}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")
    finally:
        if own:
            fh.close()


def load_graph(source, check_duplicates: bool = True) -> Graph:
    stream = read_edge_stream(source)
    return Graph.from_edges(stream.n, stream, delta=stream.delta,
                            check_duplicates=check_duplicates)


class PartialColoring:
    """Per-vertex colors in ``1..q``; ``0`` marks an uncolored vertex."""

    def __init__(self, colors, q: int):
        self.color = np.asarray(colors, dtype=np.int64).copy()
        self.q = int(q)

    @classmethod
    def empty(cls, n: int, q: int) -> "PartialColoring":
        return cls(np.zeros(n, dtype=np.int64), q)

    def __len__(self):
        return len(self.color)

    def __getitem__(self, v):
        return int(self.color[v])

    def domain(self) -> np.ndarray:
        return np.flatnonzero(self.color != UNCOLORED)

    def copy(self) -> "PartialColoring":
        return PartialColoring(self.color, self.q)


@dataclass
class ColoringReport:
    proper: bool
    colors_used: int
    uncolored_count: int
    within_budget: bool
    first_violation: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.proper and self.within_budget and self.uncolored_count == 0


def verify_coloring(g: Graph, c, q: int) -> ColoringReport:
    """Check properness of ``c`` on ``g`` and whether it fits in ``q`` colors."""
    colors = np.asarray(c.color if isinstance(c, PartialColoring) else c, dtype=np.int64)
    if len(colors) != g.n:
        raise ValueError("coloring length differs from vertex count")
    first = None
    for u, v in g.edges():
        cu = colors[u]
        if cu != UNCOLORED and cu == colors[v]:
            first = (u, v)
            break
    used = colors[colors != UNCOLORED]
    distinct = len(np.unique(used))
    within = bool(used.size == 0 or (used.min() >= 1 and used.max() <= q))
    return ColoringReport(
        proper=first is None,
        colors_used=int(distinct),
        uncolored_count=int(np.count_nonzero(colors == UNCOLORED)),
        within_budget=within,
        first_violation=first,
    )


def write_coloring(dest, colors) -> None:
    own = isinstance(dest, (str, os.PathLike))
    fh = open(dest, "w", encoding="ascii", newline="\n") if own else dest
    try:
        for v, c in enumerate(np.asarray(colors)):
            fh.write(f"{v} {int(c) if c != UNCOLORED else '-'}\n")
    finally:
        if own:
            fh.close()


def read_coloring(source, n: Optional[int] = None) -> np.ndarray:
    own = isinstance(source, (str, os.PathLike))
    fh = open(source, "r", encoding="ascii") if own else source
    try:
        pairs = []
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise ValueError(f"coloring line {line.strip()!r}: expected 'vertex color'")
            v = int(parts[0])
            if v < 0 or (n is not None and v >= n):
                raise ValueError(f"coloring names vertex {v} outside the graph")
            pairs.append((v, UNCOLORED if parts[1] == "-" else int(parts[1])))
    finally:
        if own:
            fh.close()
    size = n if n is not None else (max(v for v, _ in pairs) + 1 if pairs else 0)
    out = np.zeros(size, dtype=np.int64)
    for v, c in pairs:
        out[v] = c
    return out


def has_clique_of_size(g: Graph, s: int, budget: int = 2_000_000) -> bool:
    """Exact clique search: is there a clique on ``s`` vertices?

    Branch and bound with a greedy-coloring bound; raises
    :class:`BudgetExceeded` after ``budget`` node expansions.
    """
    if s <= 0:
        return True
    if s == 1:
        return g.n > 0
    # only vertices of degree >= s-1 can take part
    cand = [v for v in range(g.n) if g.degree(v) >= s - 1]
    return max_clique(g, cand, budget=budget, target=s) is not None


def max_clique(g: Graph, vertices=None, budget: int = 2_000_000, target: Optional[int] = None,
               adjacency=None):
    """Largest clique among ``vertices`` (or one of size ``target``).

    Ties are broken towards the lexicographically smallest sorted vertex
    tuple.  Returns a sorted tuple, or ``None`` when ``target`` is given and
    unreachable.  ``adjacency`` (dict of sets) may override ``g``.
    """
    verts = sorted(range(g.n) if vertices is None else vertices)
    vset = set(verts)
    if adjacency is None:
        nbr = {v: g.neighbor_set(v) & vset for v in verts}
    else:
        nbr = {v: set(adjacency[v]) & vset for v in verts}
    best = [()]
    nodes = [0]
    goal = target

    def color_bound(P):
        # greedy coloring in ascending order; color classes bound clique size
        order = sorted(P)
        classes = []
        bound = {}
        for v in order:
            for k, cls in enumerate(classes):
                if not (nbr[v] & cls):
                    cls.add(v)
                    bound[v] = k + 1
                    break
            else:
                classes.append({v})
                bound[v] = len(classes)
        return sorted(order, key=lambda v: (bound[v], v)), bound

    def better(cand):
        b = best[0]
        if len(cand) != len(b):
            return len(cand) > len(b)
        return tuple(sorted(cand)) < tuple(sorted(b))

    def expand(R, P):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"clique search exceeded {budget} nodes")
        if not P:
            if better(R):
                best[0] = tuple(sorted(R))
            return goal is not None and len(best[0]) >= goal
        order, bound = color_bound(P)
        P = set(P)
        for v in reversed(order):
            # ties must still be explored for the lexicographic rule
            if len(R) + bound[v] < len(best[0]):
                return False
            if goal is not None and len(R) + bound[v] < goal:
                return False
            if expand(R + [v], P & nbr[v]):
                return True
            P.discard(v)
            if not P and better(R):
                best[0] = tuple(sorted(R))
        return False

    expand([], set(verts))
    if goal is not None:
        return best[0] if len(best[0]) >= goal else None
    return best[0]

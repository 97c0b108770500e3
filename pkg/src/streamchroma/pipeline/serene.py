"""Provenance-tagged colorings and the knowledge they may rely on.

A color is either drawn from one of the vertex's pre-sampled lists or
assigned to a vertex whose whole neighborhood is known.  Conflicts are
checked only against what the summary reveals:

* a vertex with known neighborhood sees all its neighbors;
* any other vertex sees its sparsified neighbors plus every known vertex
  that lists it as a neighbor.

That view is complete for the colors such a vertex may take: a list-colored
neighbor sharing the color shares a list color, so the edge was kept in the
sparsified graph, and a neighbor colored through its known neighborhood
lists the vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set

import numpy as np

from ..errors import SereneViolation
from ..graph import UNCOLORED, PartialColoring

KNOWN = 9  # provenance code for "neighborhood known"; list ids use 2..6
NONE = 0


class Knowledge:
    """Adjacency the pipeline is allowed to look at."""

    def __init__(self, summary):
        n = summary.n
        self.n = n
        self.summary = summary
        self.palettes = summary.palettes
        self.sp: List[Set[int]] = [set() for _ in range(n)]
        for u, v in summary.sparsified:
            self.sp[int(u)].add(int(v))
            self.sp[int(v)].add(int(u))
        self.known: Dict[int, frozenset] = {}
        for v in summary.recovered:
            nb = summary.known_neighborhood(v)
            if nb is not None:
                self.known[v] = nb
        self.rev: List[Set[int]] = [set() for _ in range(n)]
        for v, nb in self.known.items():
            for u in nb:
                self.rev[u].add(v)
        self.extra: Dict[int, Set[int]] = {}
        self.use_extra = False
        self.active = np.ones(n, dtype=bool)

    def is_known(self, v: int) -> bool:
        return v in self.known

    def visible(self, v: int) -> Set[int]:
        if v in self.known:
            nb = set(self.known[v])
        else:
            nb = self.sp[v] | self.rev[v]
        if self.use_extra and v in self.extra:
            nb |= self.extra[v]
        return nb

    def adjacent(self, a: int, b: int) -> Optional[bool]:
        """Adjacency if it can be decided from the summary, else ``None``."""
        if a in self.known:
            return b in self.known[a]
        if b in self.known:
            return a in self.known[b]
        if b in self.sp[a]:
            return True
        return None

    def add_extra_edge(self, a: int, b: int) -> None:
        self.extra.setdefault(a, set()).add(b)
        self.extra.setdefault(b, set()).add(a)


class SereneColoring:
    """Partial coloring over ``1..delta-1`` with one provenance per vertex."""

    def __init__(self, n: int, q: int, kb: Knowledge):
        self.q = q
        self.color = np.zeros(n, dtype=np.int64)
        self.prov = np.zeros(n, dtype=np.int8)
        self.kb = kb
        self.log: List[tuple] = []

    # -- queries
    def colored(self, v: int) -> bool:
        return self.color[v] != UNCOLORED

    def neighbor_colors(self, v: int) -> Set[int]:
        col = self.color
        act = self.kb.active
        return {int(col[u]) for u in self.kb.visible(v) if col[u] and act[u]}

    def available(self, v: int, c: int) -> bool:
        return 1 <= c <= self.q and c not in self.neighbor_colors(v)

    def free_colors(self, v: int) -> List[int]:
        used = self.neighbor_colors(v)
        return [c for c in range(1, self.q + 1) if c not in used]

    def uncolored_neighbors(self, v: int, within=None) -> int:
        act = self.kb.active
        nb = self.kb.visible(v)
        if within is not None:
            nb = nb & within
        return sum(1 for u in nb if act[u] and not self.color[u])

    # -- updates
    def assign(self, v: int, c: int, prov: int, step: str = "") -> None:
        if prov == KNOWN:
            if not self.kb.is_known(v):
                raise SereneViolation(f"vertex {v} has no known neighborhood", step=step, witness={"vertex": v})
        else:
            if not self.kb.palettes.contains(prov, v, c):
                raise SereneViolation(f"color {c} not in L{prov}({v})", step=step,
                                      witness={"vertex": v, "color": c, "list": prov})
        if not self.available(v, c):
            raise SereneViolation(f"color {c} conflicts at vertex {v}", step=step,
                                  witness={"vertex": v, "color": c})
        self.color[v] = c
        self.prov[v] = prov
        self.log.append((step, v, c))

    def unassign(self, v: int) -> None:
        self.color[v] = UNCOLORED
        self.prov[v] = NONE

    def first_list_color(self, v: int, i: int, forbid: Iterable[int] = ()) -> Optional[int]:
        used = self.neighbor_colors(v) | set(forbid)
        for c in self.kb.palettes.get(i, v):
            if int(c) not in used:
                return int(c)
        return None

    def as_partial(self) -> PartialColoring:
        return PartialColoring(self.color, self.q)


def check_serene(coloring: SereneColoring, summary) -> tuple:
    """Validate every provenance tag: list colors must be in the named list,
    neighborhood-known colors only on recovered vertices."""
    pal = summary.palettes
    for v in np.flatnonzero(coloring.color):
        v = int(v)
        c = int(coloring.color[v])
        p = int(coloring.prov[v])
        if p == KNOWN:
            if v not in summary.recovered:
                return False, {"vertex": v, "reason": "known provenance without recovery"}
        elif p in (2, 3, 4, 5, 6):
            if not pal.contains(p, v, c):
                return False, {"vertex": v, "reason": f"color {c} not in L{p}"}
        else:
            return False, {"vertex": v, "reason": "colored without provenance"}
    return True, None


__all__ = ["KNOWN", "Knowledge", "SereneColoring", "check_serene"]

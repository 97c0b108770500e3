"""Shared mutable state of one pipeline run."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

import numpy as np

from ..stream import derive_rng
from ..structure import CRITICAL, LARGE, SMALL
from .serene import Knowledge, SereneColoring


@dataclass
class RTEntry:
    """Choices made for one clique removed by the Reed Transform."""

    clique: int
    members: tuple
    core: tuple
    s: int
    kind: str  # "edge", "adjacent" or "lowdeg"
    D: tuple = ()
    f: Dict[int, int] = field(default_factory=dict)
    S: tuple = ()
    T: tuple = ()
    u: Optional[int] = None
    v: Optional[int] = None
    x: Optional[int] = None
    y: Optional[int] = None
    attempts: int = 0

    def as_dict(self):
        d = dict(self.__dict__)
        d["f"] = {str(k): v for k, v in sorted(self.f.items())}
        return d


@dataclass
class ReedTransformRecord:
    entries: List[RTEntry] = field(default_factory=list)
    A_RT: Set[int] = field(default_factory=set)
    E_new: List[tuple] = field(default_factory=list)

    @property
    def removed(self) -> List[int]:
        return [e.clique for e in self.entries]


class Ctx:
    def __init__(self, summary):
        self.summary = summary
        self.cfg = summary.cfg
        self.delta = summary.delta
        self.n = summary.n
        self.q = summary.delta - 1
        self.kb = Knowledge(summary)
        self.phi = SereneColoring(self.n, self.q, self.kb)
        self.cliques = summary.cliques
        self.clique_of = summary.decomposition.clique_of
        self.removed_step1: List[int] = []
        self.record = ReedTransformRecord()
        self.attribution: Dict[str, str] = {}
        self.diagnostics: Dict[str, object] = {}

    def rng(self, tag: str, *extra):
        return derive_rng(self.cfg.seed, tag, *extra)

    def members(self, ci: int):
        return self.cliques[ci].members

    def set_active(self, vertices, value: bool) -> None:
        idx = np.fromiter((int(v) for v in vertices), dtype=np.int64)
        self.kb.active[idx] = value

    def is_critical(self, ci: int) -> bool:
        return self.cliques[ci].size_class == CRITICAL

    def in_critical_same(self, a: int, b: int) -> bool:
        ca, cb = int(self.clique_of[a]), int(self.clique_of[b])
        return ca >= 0 and ca == cb and self.is_critical(ca)

    def current_degree(self, v: int) -> int:
        """Degree of a known vertex inside the current graph."""
        nb = self.kb.known[v]
        act = self.kb.active
        d = sum(1 for u in nb if act[u])
        if self.kb.use_extra:
            d += sum(1 for u in self.kb.extra.get(v, ()) if act[u])
        return d


__all__ = ["RTEntry", "ReedTransformRecord", "Ctx", "SMALL", "CRITICAL", "LARGE"]

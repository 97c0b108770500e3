"""Post-pass classification of almost-cliques.

Everything here is computed from the summary alone: the members of each
almost-clique and the recovered ``A(v)`` / ``E(v)`` sets.  An anti-edge is
*known* when at least one endpoint was recovered; only anti-edges between two
unrecovered vertices stay invisible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .errors import CoreUndetermined
from .graph import max_clique

SMALL, CRITICAL, LARGE = "small", "critical", "large"


def classify_size(size: int, delta: int, rho: int) -> str:
    if size <= delta + 1 - rho:
        return SMALL
    if size >= delta + 1:
        return LARGE
    return CRITICAL


def friend_ks(cfg) -> Tuple[int, ...]:
    """The three friendship scales the pipeline consumes."""
    rho = cfg.rho
    return (2 * rho, rho, int(round(cfg.alpha * rho * rho)))


@dataclass
class AlmostClique:
    index: int
    members: Tuple[int, ...]
    size_class: str
    anti: Dict[int, frozenset] = field(default_factory=dict)
    ext: Dict[int, frozenset] = field(default_factory=dict)
    unrecovered: Tuple[int, ...] = ()
    anti_edges: frozenset = frozenset()
    anti_lower_bound: int = 0
    holey: bool = False
    solitary: bool = False
    witness: Optional[dict] = None
    core: Optional[Tuple[int, ...]] = None
    outside: Optional[int] = None
    helper: Optional[dict] = None
    needs_helper: bool = False
    friends: Dict[int, List[Tuple[int, int]]] = field(default_factory=dict)
    core_nbrs: Dict[int, frozenset] = field(default_factory=dict)
    popular: Dict[int, Optional[dict]] = field(default_factory=dict)
    friendly: Dict[int, bool] = field(default_factory=dict)
    X: Tuple[int, ...] = ()
    Y: Tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.members)

    def anti_neighbors(self, v: int) -> frozenset:
        """Known anti-neighbors of ``v`` inside the clique."""
        out = set(self.anti.get(v, ()))
        for a, b in self.anti_edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return frozenset(out)

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "members": list(self.members),
            "core": list(self.core) if self.core is not None else None,
            "size_class": self.size_class,
            "flags": {
                "solitary": self.solitary,
                "holey": self.holey,
                "popular": {str(k): v is not None for k, v in sorted(self.popular.items())},
                "friendly": {str(k): v for k, v in sorted(self.friendly.items())},
            },
            "outside_vertex": self.outside,
            "friends": {str(k): [list(f) for f in v] for k, v in sorted(self.friends.items())},
            "witnesses": {
                "solitary": self.witness,
                "helper": self.helper,
                "popular": {str(k): v for k, v in sorted(self.popular.items()) if v is not None},
            },
            "unrecovered": list(self.unrecovered),
            "anti_edges": sorted(list(e) for e in self.anti_edges),
            "X": list(self.X),
            "Y": list(self.Y),
        }


# ---------------------------------------------------------------- pieces

def known_anti_edges(members, anti: Dict[int, frozenset]) -> frozenset:
    out = set()
    for v, A in anti.items():
        for u in A:
            out.add((min(u, v), max(u, v)))
    return frozenset(out)


def detect_solitary(anti_edges, unrecovered=(), size_class=CRITICAL):
    """Return ``(solitary, witness)``.

    With all anti-edges known the clique is solitary exactly when its
    anti-edge graph has two disjoint edges or a triangle.  Two unrecovered
    members of a non-small clique each have at least two anti-neighbors, so
    neither lies in the core and the clique is solitary as well.
    """
    edges = sorted(anti_edges)
    for i, e in enumerate(edges):
        for f in edges[i + 1:]:
            if not set(e) & set(f):
                return True, {"kind": "anti_matching", "edges": [list(e), list(f)]}
    adj: Dict[int, set] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    for a, b in edges:
        common = adj[a] & adj[b]
        if common:
            c = min(common)
            return True, {"kind": "independent_set", "vertices": sorted((a, b, c))}
    if size_class != SMALL and len(unrecovered) >= 2:
        return True, {"kind": "unrecovered", "vertices": list(unrecovered[:2])}
    return False, None


def compute_core(members, anti_edges, complete: bool = True, desk_limit: int = 4096):
    """Maximum clique of ``G[C]`` given its anti-edges.

    The fast path covers the non-solitary shapes: no anti-edge (``K = C``),
    a star of anti-edges (drop the centre) and a single anti-edge (drop the
    larger endpoint, keeping the lexicographically smaller set).  Anything
    else goes to the exact search, allowed only at desk scale.
    """
    members = tuple(sorted(members))
    edges = sorted(anti_edges)
    if not edges:
        return members
    if len(edges) == 1:
        a, b = edges[0]
        drop = max(a, b)
        return tuple(v for v in members if v != drop)
    common = set(edges[0])
    for e in edges[1:]:
        common &= set(e)
    if len(common) == 1:
        centre = common.pop()
        return tuple(v for v in members if v != centre)
    if not complete or len(members) > desk_limit:
        raise CoreUndetermined("core needs an exact search on incomplete data")
    return core_exact(members, edges)


def core_exact(members, anti_edges):
    mset = set(members)
    missing = {v: set() for v in members}
    for a, b in anti_edges:
        missing[a].add(b)
        missing[b].add(a)
    adj = {v: mset - missing[v] - {v} for v in members}

    class _G:  # the clique search only touches n and neighbor_set when adjacency is given
        n = max(members) + 1 if members else 0

    return tuple(max_clique(_G, members, adjacency=adj))


def find_helper(anti_edges, recovered: set):
    """A 2-anti-matching with a recovered endpoint on each anti-edge, or a
    3-independent set with two recovered vertices."""
    edges = sorted(anti_edges)
    for i, e in enumerate(edges):
        for f in edges[i + 1:]:
            if set(e) & set(f):
                continue
            pairs = []
            for a, b in (e, f):
                if a in recovered:
                    pairs.append((a, b))
                elif b in recovered:
                    pairs.append((b, a))
            if len(pairs) == 2:
                return {"kind": "anti_matching", "pairs": [list(p) for p in pairs]}
    adj: Dict[int, set] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    for a, b in edges:
        for c in sorted(adj[a] & adj[b]):
            tri = sorted((a, b, c))
            rec = [x for x in tri if x in recovered]
            if len(rec) >= 2:
                rest = [x for x in tri if x not in rec[:2]]
                return {"kind": "independent_set", "known": rec[:2], "other": rest[0]}
    return None


def popular_structure(K, nbrs_in_K: Dict[int, frozenset], friends: List[int]):
    """Two friends sharing a core neighbor ``w`` with distinct core anti-neighbors."""
    kset = frozenset(K)
    for x1, x2 in combinations(sorted(friends), 2):
        shared = nbrs_in_K[x1] & nbrs_in_K[x2]
        if not shared:
            continue
        a1 = sorted(kset - nbrs_in_K[x1])
        a2 = sorted(kset - nbrs_in_K[x2])
        for z1 in a1:
            rest = [z for z in a2 if z != z1]
            if rest:
                return {"x1": x1, "x2": x2, "w": min(shared), "z1": z1, "z2": rest[0]}
    return None


def classify_friends(K, nbrs_in_K: Dict[int, frozenset], k: int, delta: int):
    """Friends at scale ``k``: at least ``delta/k`` core neighbors and one core non-neighbor."""
    need = delta / k
    kk = len(K)
    friends = sorted((x, len(s)) for x, s in nbrs_in_K.items() if len(s) >= need and len(s) < kk)
    pop = popular_structure(K, nbrs_in_K, [x for x, _ in friends])
    return friends, pop, bool(friends) and pop is None


# ---------------------------------------------------------------- driver

def analyze_cliques(summary) -> List[AlmostClique]:
    cfg = summary.cfg
    delta = summary.delta
    dec = summary.decomposition
    rec = summary.recovered
    holey_threshold = cfg.holey_const * cfg.epsilon * delta
    out = []
    for idx, C in enumerate(dec.cliques):
        members = tuple(int(v) for v in C)
        cls = classify_size(len(members), delta, cfg.rho)
        anti = {v: rec[v].anti for v in members if v in rec}
        ext = {v: rec[v].ext for v in members if v in rec}
        unrec = tuple(v for v in members if v not in rec)
        edges = known_anti_edges(members, anti)
        ac = AlmostClique(idx, members, cls, anti, ext, unrec, edges)
        # anti-degree lower bound for an unrecovered member: a + e > 4 rho and
        # e <= delta - (|C| - 1 - a) give a >= (4 rho + |C| - delta) / 2
        lb_unrec = max(0, math.ceil((4 * cfg.rho + 1 + len(members) - delta - 1) / 2))
        known_deg = {v: len(ac.anti_neighbors(v)) for v in members}
        total = sum(known_deg[v] if v in rec else max(known_deg[v], lb_unrec) for v in members)
        ac.anti_lower_bound = max(len(edges), math.ceil(total / 2))
        ac.holey = ac.anti_lower_bound >= holey_threshold
        ac.solitary, ac.witness = detect_solitary(edges, unrec, cls)
        ac.needs_helper = cls != SMALL and ac.solitary and not ac.holey
        if ac.needs_helper:
            ac.helper = find_helper(edges, set(anti))
        if cls != SMALL and not ac.solitary and not ac.holey:
            ac.core = compute_core(members, edges, complete=len(unrec) <= 1)
            extra = sorted(set(members) - set(ac.core))
            ac.outside = extra[0] if extra else None
            _friend_data(ac, summary)
        out.append(ac)
    return out


def _friend_data(ac: AlmostClique, summary):
    cfg = summary.cfg
    K = ac.core
    kset = set(K)
    nbrs: Dict[int, set] = {}
    for u in K:
        E = ac.ext.get(u)
        if E is None:
            continue
        for x in E:
            nbrs.setdefault(x, set()).add(u)
    if ac.outside is not None:
        s = ac.outside
        nbrs[s] = {u for u in K if s not in ac.anti.get(u, frozenset())}
    ac.core_nbrs = {x: frozenset(s) for x, s in nbrs.items()}
    for k in friend_ks(cfg):
        fr, pop, fl = classify_friends(K, ac.core_nbrs, k, summary.delta)
        ac.friends[k] = fr
        ac.popular[k] = pop
        ac.friendly[k] = fl
    externals = set()
    for u in ac.members:
        externals |= set(ac.ext.get(u, ()))
    externals -= set(ac.members)
    thr = 2 * cfg.rho
    ac.X = tuple(sorted(x for x in externals if len(ac.core_nbrs.get(x, ())) >= thr))
    ac.Y = tuple(sorted(x for x in externals if len(ac.core_nbrs.get(x, ())) < thr))


__all__ = [
    "SMALL", "CRITICAL", "LARGE", "AlmostClique", "classify_size", "compute_core", "core_exact",
    "detect_solitary", "find_helper", "classify_friends", "popular_structure", "analyze_cliques",
    "friend_ks",
]

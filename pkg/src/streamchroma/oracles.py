"""Independent brute-force oracles and statistical helpers.

Nothing in here shares code paths with the engine it checks: the exact
colorer is a plain DSATUR branch and bound, sparse recovery is solved by
enumerating supports and Cramer's rule, and the decomposition checker
counts neighborhood edges directly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.stats import norm

from .errors import BudgetExceeded
from .graph import Graph, max_clique

AMBIGUOUS = "AMBIGUOUS"


# ---------------------------------------------------------------- exact coloring

@dataclass
class ExactColoringResult:
    """Either ``colors`` (1-based, length n) or ``colors is None`` with a certificate."""

    colors: Optional[np.ndarray]
    q: int
    nodes: int
    certificate: Dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.colors is not None


def _components(g: Graph, vertices):
    seen = set()
    for s in vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        yield sorted(comp)


def exact_color(g: Graph, q: int, budget: int = 5_000_000) -> ExactColoringResult:
    """Complete search for a proper ``q``-coloring.

    Works component by component with DSATUR ordering and symmetry breaking
    on fresh colors.  A clique larger than ``q`` short-circuits to UNSAT with
    the clique as certificate; otherwise an UNSAT answer certifies that the
    search tree was exhausted.
    """
    colors = np.zeros(g.n, dtype=np.int64)
    total = 0
    for comp in _components(g, range(g.n)):
        if len(comp) == 1:
            if q < 1:
                return ExactColoringResult(None, q, total, {"reason": "q<1", "component": comp})
            colors[comp[0]] = 1
            continue
        try:
            cl = max_clique(g, comp, budget=budget)
        except BudgetExceeded:
            cl = ()
        if len(cl) > q:
            return ExactColoringResult(None, q, total, {"reason": "clique", "clique": list(cl)})
        ok, nodes = _dsatur_component(g, comp, q, colors, budget - total, seed_clique=cl)
        total += nodes
        if not ok:
            return ExactColoringResult(None, q, total,
                                       {"reason": "exhausted", "component": comp, "nodes": nodes})
    return ExactColoringResult(colors, q, total, {})


def _dsatur_component(g, comp, q, colors, budget, seed_clique=()):
    nbr = {v: g.adj[v] for v in comp}
    # pre-color a maximum clique with 1..|K|; valid up to color symmetry
    for i, v in enumerate(seed_clique):
        colors[v] = i + 1
    uncol = set(comp) - set(seed_clique)
    # sat[v][c] counts colored neighbors of v with color c; nsat[v] the distinct ones
    sat = {v: [0] * (q + 2) for v in comp}
    nsat = {v: 0 for v in comp}
    deg = {v: len(nbr[v]) for v in comp}

    def assign(v, c):
        colors[v] = c
        for w in nbr[v]:
            row = sat[w]
            if row[c] == 0:
                nsat[w] += 1
            row[c] += 1

    def unassign(v):
        c = colors[v]
        colors[v] = 0
        for w in nbr[v]:
            row = sat[w]
            row[c] -= 1
            if row[c] == 0:
                nsat[w] -= 1

    for v in seed_clique:
        c = colors[v]
        colors[v] = 0
        assign(v, c)
    nodes = 0
    frames = []  # [vertex, last color tried, max color before it]
    maxc = len(seed_clique)
    while uncol:
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"exact coloring exceeded {budget} nodes")
        v = max(uncol, key=lambda u: (nsat[u], deg[u], -u))
        uncol.discard(v)
        frames.append([v, 0, maxc])
        while True:
            if not frames:
                for u in comp:
                    colors[u] = 0
                return False, nodes
            fr = frames[-1]
            u, last, mc = fr
            if last:
                unassign(u)
            top = min(q, mc + 1)
            c = last + 1
            row = sat[u]
            while c <= top and row[c]:
                c += 1
            if c <= top:
                assign(u, c)
                fr[1] = c
                maxc = max(mc, c)
                break
            frames.pop()
            uncol.add(u)
    return True, nodes


def chromatic_number(g: Graph, budget: int = 5_000_000) -> int:
    q = 1 if g.n else 0
    while q <= g.max_degree() + 1:
        if exact_color(g, q, budget).sat:
            return q
        q += 1
    return q


# ---------------------------------------------------------------- sparse recovery

def _det_mod(M: np.ndarray, p: int) -> np.ndarray:
    """Determinants of a batch of 1x1, 2x2 or 3x3 matrices mod p (entries < p < 2^31)."""
    s = M.shape[-1]
    if s == 1:
        return M[..., 0, 0] % p
    if s == 2:
        return (M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]) % p

    def m2(a, b, c, d):
        return (a * d - b * c) % p

    a = M[..., 0, 0] * m2(M[..., 1, 1], M[..., 1, 2], M[..., 2, 1], M[..., 2, 2]) % p
    b = M[..., 0, 1] * m2(M[..., 1, 0], M[..., 1, 2], M[..., 2, 0], M[..., 2, 2]) % p
    c = M[..., 0, 2] * m2(M[..., 1, 0], M[..., 1, 1], M[..., 2, 0], M[..., 2, 1]) % p
    return (a - b + c) % p


def brute_force_recover(syndromes, k: int, n: int, p: int):
    """Exhaustive recovery from ``2k`` power-sum syndromes.

    Row ``r`` of the syndrome vector is ``sum_j x_j (j+1)^r mod p``.  Every
    support of size at most ``k`` is tried; coefficients come from Cramer's
    rule on the first ``|support|`` rows and must satisfy all rows and be
    non-zero.  Returns ``{coord: signed coefficient}`` when exactly one
    support fits, else :data:`AMBIGUOUS` (or ``None`` when nothing fits).
    """
    if n > 30 or k > 3:
        raise ValueError("brute force recovery is limited to n <= 30, k <= 3")
    if p >= 1 << 20:
        raise ValueError("brute force recovery expects a small prime")
    syn = np.asarray(syndromes, dtype=np.int64) % p
    rows = len(syn)
    if not syn.any():
        return {}
    pts = np.arange(1, n + 1, dtype=np.int64)
    pw = np.ones((rows, n), dtype=np.int64)
    for r in range(1, rows):
        pw[r] = pw[r - 1] * pts % p
    found = []
    for size in range(1, k + 1):
        sup = np.array(list(itertools.combinations(range(n), size)), dtype=np.int64)
        A = pw[:size][:, sup].transpose(1, 0, 2)  # (S, size rows, size cols)
        det = _det_mod(A, p)
        good = det != 0
        if not good.any():
            continue
        sup, A, det = sup[good], A[good], det[good]
        inv = np.array([pow(int(d), p - 2, p) for d in det], dtype=np.int64)
        coef = np.empty((len(sup), size), dtype=np.int64)
        for c in range(size):
            Ac = A.copy()
            Ac[:, :, c] = syn[:size]
            coef[:, c] = _det_mod(Ac, p) * inv % p
        ok = (coef != 0).all(axis=1)
        # all 2k rows must agree
        pred = np.zeros((len(sup), rows), dtype=np.int64)
        for c in range(size):
            pred = (pred + pw[:, sup[:, c]].T * coef[:, c:c + 1]) % p
        ok &= (pred == syn).all(axis=1)
        for idx in np.flatnonzero(ok):
            found.append({int(j): _signed(int(x), p) for j, x in zip(sup[idx], coef[idx])})
    if not found:
        return None
    if len(found) > 1:
        return AMBIGUOUS
    return found[0]


def _signed(x: int, p: int) -> int:
    return x - p if x > p // 2 else x


# ---------------------------------------------------------------- decomposition check

@dataclass(frozen=True)
class AcdViolation:
    kind: str
    where: object
    value: float
    threshold: float


def neighborhood_edge_count(g: Graph, v: int) -> int:
    nv = g.neighbor_set(v)
    return sum(len(nv & g.neighbor_set(u)) for u in g.adj[v]) // 2


def check_acd(g: Graph, sparse: Sequence[int], cliques: Sequence[Sequence[int]],
              eta: float, eps: float, delta: Optional[float] = None) -> List[AcdViolation]:
    """Validate a vertex partition as an almost-clique decomposition.

    Sparse vertices must be ``eta*eps^2*Delta``-sparse (at most
    ``C(Delta,2) - zeta*Delta`` edges among their neighbors); each clique
    must have size within ``(1 +- eps/2) Delta``, every member at most
    ``eps*Delta`` anti-neighbors inside and external neighbors outside, and
    every outside vertex at least ``delta*Delta`` non-neighbors in it.
    """
    D = g.delta
    delta = eps if delta is None else delta
    out: List[AcdViolation] = []
    seen = {}
    for v in sparse:
        seen[v] = seen.get(v, 0) + 1
    for i, C in enumerate(cliques):
        for v in C:
            seen[v] = seen.get(v, 0) + 1
    for v in range(g.n):
        if seen.get(v, 0) != 1:
            out.append(AcdViolation("partition", v, seen.get(v, 0), 1))
    zeta = eta * eps * eps * D
    cap = D * (D - 1) / 2 - zeta * D
    for v in sparse:
        cnt = neighborhood_edge_count(g, v)
        if cnt > cap:
            out.append(AcdViolation("sparsity", v, cnt, cap))
    for i, C in enumerate(cliques):
        cs = set(C)
        lo, hi = (1 - eps / 2) * D, (1 + eps / 2) * D
        if not lo <= len(cs) <= hi:
            out.append(AcdViolation("size", i, len(cs), lo if len(cs) < lo else hi))
        for v in C:
            nv = g.neighbor_set(v)
            anti = len(cs - nv) - 1
            ext = len(nv - cs)
            if anti > eps * D:
                out.append(AcdViolation("anti-neighbors", v, anti, eps * D))
            if ext > eps * D:
                out.append(AcdViolation("external-neighbors", v, ext, eps * D))
        outside = set()
        for v in C:
            outside.update(g.neighbor_set(v))
        outside -= cs
        need = delta * D
        for w in sorted(outside):
            miss = len(cs - g.neighbor_set(w))
            if miss < need:
                out.append(AcdViolation("outside-non-neighbors", (i, w), miss, need))
        if len(cs) < need and g.n > len(cs):
            # non-adjacent outsiders miss all of C
            out.append(AcdViolation("outside-non-neighbors", (i, None), len(cs), need))
    return out


def exact_decomposition(g: Graph, eps: float) -> tuple:
    """Reference decomposition from the full graph: maximal components of
    mutually similar dense vertices, computed with exact common-neighbor
    counts.  Thin wrapper kept here so tests can compare against it."""
    from .decomposition import decompose_exact
    return decompose_exact(g, eps)


# ---------------------------------------------------------------- statistics

def wilson_interval(successes: int, trials: int, confidence: float = 0.99):
    if trials <= 0:
        return (0.0, 1.0)
    z = norm.ppf(0.5 + confidence / 2)
    phat = successes / trials
    den = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / den
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / den
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass
class StatRow:
    event: str
    successes: int
    trials: int

    @property
    def frequency(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    @property
    def ci(self):
        return wilson_interval(self.successes, self.trials)

    def line(self) -> str:
        lo, hi = self.ci
        return f"{self.event}\t{self.successes}/{self.trials}\t{self.frequency:.4f}\t[{lo:.4f}, {hi:.4f}]"


__all__ = [
    "AMBIGUOUS", "ExactColoringResult", "exact_color", "chromatic_number",
    "brute_force_recover", "AcdViolation", "check_acd", "neighborhood_edge_count",
    "wilson_interval", "StatRow",
]

"""Monte-Carlo statistics of one slack-generation round on small families.

Each family builds a graph, the vertices to watch and an event predicate.
Trials run the same keep rule as the pipeline's step 2 in batches: every
batch draws from its own generator derived from ``(seed, family, param,
batch)``, so results do not depend on how batches are scheduled.

Frequencies are reported with 99% Wilson intervals.  Reference counts at
seed 0 are frozen in a fixtures file and re-checked by the tests.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .graph import Graph
from .oracles import StatRow
from .pipeline.slack import keep_mask
from .stream import derive_seed

BATCH = 500


@dataclass
class Family:
    """A graph, a palette size, an activation rate and an event over a batch.

    ``event(kept, colors, trial)`` gets ``(batch, n)`` arrays and returns a boolean
    array of length ``batch``.  ``measure`` is an optional per-trial number
    (averaged, reported but not asserted).
    """

    name: str
    param: int
    graph: Graph
    q: int
    p: float
    event_name: str
    event: Callable
    measure: Optional[Callable] = None
    watched: Sequence[int] = ()

    @property
    def label(self) -> str:
        return f"{self.name}[{self.param}]"


@dataclass
class StatResult:
    family: str
    param: int
    row: StatRow
    mean_measure: Optional[float] = None

    def as_dict(self) -> dict:
        lo, hi = self.row.ci
        return {"family": self.family, "param": self.param, "event": self.row.event,
                "successes": self.row.successes, "trials": self.row.trials,
                "frequency": self.row.frequency, "ci": [lo, hi], "mean_measure": self.mean_measure}


# ---------------------------------------------------------------- families

def edgeless_family(n: int = 64, q: int = 10, p: float = 0.5) -> Family:
    g = Graph.from_edges(n, [], delta=q + 1)

    def event(kept, colors, trial):
        return np.all(kept == trial, axis=1)

    return Family("edgeless", n, g, q, p, "every trying vertex keeps its color", event,
                  watched=range(n))


def clique_family(delta: int = 50, count: int = 1, p: float = 0.1) -> Family:
    """Disjoint ``(delta+1)``-cliques; at most ``delta/5`` colored in each."""
    size = delta + 1
    edges = [(b * size + i, b * size + j) for b in range(count) for i in range(size) for j in range(i + 1, size)]
    g = Graph.from_edges(count * size, edges, delta=delta)

    def event(kept, colors, trial):
        per = kept.reshape(kept.shape[0], count, size).sum(axis=2)
        return np.all(per <= delta / 5, axis=1)

    def measure(kept, colors, trial):
        return kept.reshape(kept.shape[0], count, size).sum(axis=2).max(axis=1)

    return Family("clique", delta, g, delta - 1, p, f"every clique has at most {delta / 5:g} colored",
                  event, measure, watched=range(count * size))


def sparse_family(zeta: int, delta: int = 50, p: float = 0.5, need: int = 1) -> Family:
    """A vertex whose ``delta`` neighbors miss ``zeta * delta`` edges among
    themselves (a circulant of offsets ``1..zeta`` removed)."""
    if not 0 <= 2 * zeta < delta:
        raise ValueError("need 0 <= zeta < delta / 2")
    v = delta
    nb = list(range(delta))
    missing = {(i, (i + s) % delta) for i in range(delta) for s in range(1, zeta + 1)}
    missing |= {(b, a) for a, b in missing}
    edges = [(v, u) for u in nb]
    edges += [(a, b) for a in nb for b in nb if a < b and (a, b) not in missing]
    g = Graph.from_edges(delta + 1, edges, delta=delta)

    def slack(kept, colors, trial):
        # colored neighbors minus the distinct colors they use
        k = kept[:, nb]
        c = np.where(k, colors[:, nb], 0)
        used = np.zeros((k.shape[0], colors.max() + 1), dtype=bool)
        rows = np.repeat(np.arange(k.shape[0]), len(nb))
        used[rows, c.ravel()] = True
        return k.sum(axis=1) - (used[:, 1:].sum(axis=1))

    def event(kept, colors, trial):
        return slack(kept, colors, trial) >= need

    return Family("sparse", zeta, g, delta - 1, p, f"watched vertex gets slack >= {need}", event, slack,
                  watched=[v])


def matching_family(m: int, delta: int = 50, p: float = 0.5, need: int = 2) -> Family:
    """A ``delta``-clique ``K`` and a matching of size ``m`` from ``K`` to
    fresh outside vertices.  A matched ``u`` gains slack when its partner is
    colored like some other member of ``K``."""
    if not 0 < m <= delta:
        raise ValueError("need 0 < m <= delta")
    K = list(range(delta))
    X = list(range(delta, delta + m))
    edges = [(a, b) for a in K for b in K if a < b] + [(K[i], X[i]) for i in range(m)]
    g = Graph.from_edges(delta + m, edges, delta=delta)

    def gains(kept, colors, trial):
        kc = np.where(kept[:, K], colors[:, K], 0)
        # color -> how many K members keep it (at most one, since K is a clique)
        hit = np.zeros((kept.shape[0], colors.max() + 1), dtype=bool)
        rows = np.repeat(np.arange(kept.shape[0]), len(K))
        hit[rows, kc.ravel()] = True
        hit[:, 0] = False
        xs = np.asarray(X)
        xc = colors[:, xs]
        # x and its partner are adjacent, so the member sharing x's kept color is another one
        return (kept[:, xs] & hit[np.arange(kept.shape[0])[:, None], xc]).sum(axis=1)

    def event(kept, colors, trial):
        return gains(kept, colors, trial) >= need

    return Family("matching", m, g, delta - 1, p, f"at least {need} matched members gain slack", event, gains,
                  watched=K[:m])


def triples_family(t: int, delta: int = 50, p: float = 0.5, need: int = 2) -> Family:
    """A ``(delta-1)``-clique ``C`` and ``t`` disjoint triples ``(u, v, w)``
    with ``v`` in ``C`` and ``u, w`` fresh outside vertices.  A triple counts
    when ``v`` is uncolored and both ``u`` and ``w`` carry colors kept in
    ``C``."""
    size = delta - 1
    if not 0 < t <= size:
        raise ValueError("need 0 < t <= delta - 1")
    C = list(range(size))
    U = [size + 2 * i for i in range(t)]
    W = [size + 2 * i + 1 for i in range(t)]
    edges = [(a, b) for a in C for b in C if a < b]
    edges += [(C[i], U[i]) for i in range(t)] + [(C[i], W[i]) for i in range(t)]
    g = Graph.from_edges(size + 2 * t, edges, delta=delta)

    def count(kept, colors, trial):
        B = kept.shape[0]
        kc = np.where(kept[:, C], colors[:, C], 0)
        hit = np.zeros((B, colors.max() + 1), dtype=bool)
        hit[np.repeat(np.arange(B), len(C)), kc.ravel()] = True
        hit[:, 0] = False
        r = np.arange(B)[:, None]
        u_ok = kept[:, U] & hit[r, colors[:, U]]
        w_ok = kept[:, W] & hit[r, colors[:, W]]
        return (~kept[:, C[:t]] & u_ok & w_ok).sum(axis=1)

    def event(kept, colors, trial):
        return count(kept, colors, trial) >= need

    return Family("triples", t, g, delta - 1, p, f"at least {need} triples give two units", event, count,
                  watched=C[:t])


FAMILIES: Dict[str, Callable[..., Family]] = {
    "edgeless": edgeless_family,
    "clique": clique_family,
    "sparse": sparse_family,
    "matching": matching_family,
    "triples": triples_family,
}

# parameter sweeps used for the monotonicity checks and the frozen table
SWEEPS: Dict[str, List[int]] = {
    "edgeless": [64],
    "clique": [19, 50],
    "sparse": [0, 2, 4, 8, 16],
    "matching": [4, 8, 16, 32],
    "triples": [4, 8, 16, 32],
}


# families whose event frequency must not decrease along the sweep
MONOTONE = ("sparse", "matching", "triples")


def make_family(name: str, param: Optional[int] = None) -> Family:
    if name not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
    if param is None:
        param = SWEEPS[name][0]
    if name == "edgeless":
        return edgeless_family(n=param)
    if name == "clique":
        return clique_family(delta=param)
    return FAMILIES[name](param)


# ---------------------------------------------------------------- runner

def _edge_arrays(g: Graph):
    arr = g.edge_array()
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return arr[:, 0].astype(np.int64), arr[:, 1].astype(np.int64)


def run_batch(fam: Family, seed: int, batch: int, size: int):
    rng = np.random.default_rng(derive_seed(seed, f"stats-{fam.name}", fam.param, batch))
    n = fam.graph.n
    trial = rng.random((size, n)) < fam.p
    colors = rng.integers(1, fam.q + 1, size=(size, n))
    eu, ev = _edge_arrays(fam.graph)
    kept = keep_mask(eu, ev, trial, colors)
    hits = fam.event(kept, colors, trial)
    meas = fam.measure(kept, colors, trial) if fam.measure is not None else None
    return int(np.count_nonzero(hits)), (float(np.sum(meas)) if meas is not None else None)


def slack_statistics(family, trials: int = 10_000, seed: int = 0, param: Optional[int] = None) -> StatResult:
    """Run ``trials`` slack-generation rounds on ``family`` and tally its event."""
    fam = family if isinstance(family, Family) else make_family(family, param)
    succ, total, done, b = 0, 0.0, 0, 0
    have_measure = fam.measure is not None
    while done < trials:
        size = min(BATCH, trials - done)
        s, m = run_batch(fam, seed, b, size)
        succ += s
        if have_measure:
            total += m
        done += size
        b += 1
    row = StatRow(f"{fam.label}: {fam.event_name}", succ, trials)
    return StatResult(fam.name, fam.param, row, total / trials if have_measure else None)


def sweep(name: str, trials: int = 10_000, seed: int = 0, params: Optional[Sequence[int]] = None) -> List[StatResult]:
    return [slack_statistics(name, trials, seed, p) for p in (params or SWEEPS[name])]


def is_monotone(results: Sequence[StatResult]) -> bool:
    """Frequencies non-decreasing in the family parameter."""
    fr = [r.row.frequency for r in sorted(results, key=lambda r: r.param)]
    return all(a <= b for a, b in zip(fr, fr[1:]))


def fitted_slope(results: Sequence[StatResult]) -> float:
    """Least-squares slope of the mean measure against the parameter."""
    xs = np.array([r.param for r in results], dtype=float)
    ys = np.array([r.mean_measure for r in results], dtype=float)
    return float(np.polyfit(xs, ys, 1)[0])


def table_text(results: Sequence[StatResult]) -> str:
    lines = ["event\tsuccesses/trials\tfrequency\twilson99"]
    lines += [r.row.line() for r in results]
    return "\n".join(lines) + "\n"


def reference_table(trials: int = 10_000, seed: int = 0) -> Dict[str, dict]:
    out = {}
    for name in SWEEPS:
        for r in sweep(name, trials, seed):
            out[f"{name}:{r.param}"] = {"successes": r.row.successes, "trials": trials, "seed": seed}
    return out


def write_reference(path, trials: int = 10_000, seed: int = 0) -> None:
    with open(path, "w") as fh:
        json.dump(reference_table(trials, seed), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_reference(path) -> Dict[str, dict]:
    with open(path) as fh:
        return json.load(fh)


__all__ = [
    "Family", "StatResult", "FAMILIES", "SWEEPS", "make_family", "slack_statistics", "sweep",
    "MONOTONE", "is_monotone", "fitted_slope", "table_text", "reference_table", "write_reference", "load_reference",
    "edgeless_family", "clique_family", "sparse_family", "matching_family", "triples_family",
]

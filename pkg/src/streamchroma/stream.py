"""The single pass: palettes, sparsified graph, recovery sketches, anchors.

Everything sampled before the pass (palettes, sketch levels, anchors, the
random measurement matrices) is a pure function of ``(seed, tag, vertex)``,
and every per-edge update is a commutative sum or an append that is sorted
at the end, so the resulting summary does not depend on the edge order.
"""
from __future__ import annotations

import json
import os
import struct
import zlib
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .config import RunConfig, level_count, sample_rate
from .decomposition import Decomposition, anchor_rate, estimate_decomposition
from .errors import DegenerateRates, RecoveryIncomplete
from .field import (
    FieldParams,
    choose_prime,
    decode_syndromes,
    encode,
    fingerprint_columns,
    fingerprint_of,
    power_table,
)

WORD_BYTES = 8
LIST_IDS = (3, 4, 5, 6)


def derive_rng(seed: int, tag: str, *extra: int) -> np.random.Generator:
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(tag.encode())] + [int(e) for e in extra]
    return np.random.default_rng(np.random.SeedSequence(key))


def derive_seed(seed: int, tag: str, *extra: int) -> int:
    return int(derive_rng(seed, tag, *extra).integers(0, 1 << 62))


# ---------------------------------------------------------------- palettes

class PaletteLists:
    """Per-vertex color lists over ``1..delta-1`` in CSR form.

    ``L2`` holds exactly one color per vertex; ``lists[i]`` for ``i`` in
    3..6 is a pair ``(indptr, colors)`` with each row sorted.
    """

    def __init__(self, n: int, delta: int, L2: np.ndarray, lists: Dict[int, tuple]):
        self.n = n
        self.delta = delta
        self.L2 = L2
        self.lists = lists
        self._bits = None

    def get(self, i: int, v: int) -> np.ndarray:
        if i == 2:
            return self.L2[v:v + 1]
        ptr, col = self.lists[i]
        return col[ptr[v]:ptr[v + 1]]

    def contains(self, i: int, v: int, c: int) -> bool:
        row = self.get(i, v)
        k = np.searchsorted(row, c)
        return bool(k < len(row) and row[k] == c)

    def union(self, v: int) -> np.ndarray:
        parts = [self.get(i, v) for i in (2,) + LIST_IDS]
        return np.unique(np.concatenate(parts))

    def in_union(self, v: int, c: int) -> bool:
        return any(self.contains(i, v, c) for i in (2,) + LIST_IDS)

    def size(self, i: int, v: int) -> int:
        return len(self.get(i, v))

    @property
    def words(self) -> int:
        return self.n + sum(len(self.lists[i][1]) for i in LIST_IDS)

    def bitsets(self) -> Optional[np.ndarray]:
        """Union lists packed as ``(n, W)`` uint64, or ``None`` when too wide."""
        if self._bits is not None:
            return self._bits
        width = (self.delta - 1 + 63) // 64
        if width > 64:
            return None
        bits = np.zeros((self.n, max(1, width)), dtype=np.uint64)
        one = np.uint64(1)

        def put(vs, cs):
            c0 = cs - 1
            np.bitwise_or.at(bits, (vs, c0 // 64), np.left_shift(one, (c0 % 64).astype(np.uint64)))

        put(np.arange(self.n), self.L2)
        for i in LIST_IDS:
            ptr, col = self.lists[i]
            vs = np.repeat(np.arange(self.n), np.diff(ptr))
            if len(col):
                put(vs, col)
        self._bits = bits
        return bits

    def intersects(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        bits = self.bitsets()
        if bits is not None:
            return (bits[us] & bits[vs]).any(axis=1)
        return np.array([len(np.intersect1d(self.union(int(a)), self.union(int(b)), assume_unique=True)) > 0
                         for a, b in zip(us, vs)], dtype=bool)

    def to_bytes(self) -> bytes:
        parts = [np.array([self.n, self.delta], dtype="<u8").tobytes(),
                 self.L2.astype("<u8").tobytes()]
        for i in LIST_IDS:
            ptr, col = self.lists[i]
            parts.append(ptr.astype("<u8").tobytes())
            parts.append(col.astype("<u8").tobytes())
        return b"".join(parts)


def _bernoulli_lists(n, ncolors, rate, rng, dense_limit=1 << 24):
    if rate >= 1.0:
        ptr = np.arange(n + 1, dtype=np.int64) * ncolors
        col = np.tile(np.arange(1, ncolors + 1, dtype=np.int64), n)
        return ptr, col
    if rate <= 0.0 or ncolors == 0:
        return np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    if n * ncolors <= dense_limit:
        rows, cols = [], []
        step = max(1, dense_limit // max(1, ncolors) // 4)
        for start in range(0, n, step):
            m = rng.random((min(step, n - start), ncolors)) < rate
            r, c = np.nonzero(m)
            rows.append(r + start)
            cols.append(c + 1)
        r = np.concatenate(rows)
        col = np.concatenate(cols).astype(np.int64)
        counts = np.bincount(r, minlength=n)
    else:
        counts = rng.binomial(ncolors, rate, size=n)
        col = np.concatenate([np.sort(rng.choice(ncolors, size=int(k), replace=False)) + 1
                              for k in counts]).astype(np.int64) if n else np.zeros(0, np.int64)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, col


def list_rates(cfg: RunConfig) -> Dict[int, float]:
    return {3: cfg.rate_L3, 4: cfg.rate_L4, 5: cfg.rate_L5, 6: cfg.rate_L6}


def sample_palettes(n: int, delta: int, cfg: RunConfig) -> PaletteLists:
    """Sample ``L2`` .. ``L6`` for every vertex before the pass."""
    if delta < 2:
        raise ValueError("palettes need delta >= 2")
    cfg = cfg if cfg.resolved else cfg.resolve(n, delta)
    if cfg.mode == "paper" and cfg.rho ** 3 >= delta:
        raise DegenerateRates(f"rho^3 = {cfg.rho ** 3} >= delta = {delta}; use the exact fallback")
    ncolors = delta - 1
    rng2 = derive_rng(cfg.seed, "L2")
    L2 = rng2.integers(1, ncolors + 1, size=n).astype(np.int64)
    lists = {}
    for i, rate in list_rates(cfg).items():
        lists[i] = _bernoulli_lists(n, ncolors, min(1.0, max(0.0, rate)), derive_rng(cfg.seed, f"L{i}"))
    return PaletteLists(n, delta, L2, lists)


# ---------------------------------------------------------------- sketch levels

@dataclass
class SketchLevel:
    index: int
    s: int
    rate: float
    members: np.ndarray
    row_of: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    matrix_seed: int

    @property
    def words(self) -> int:
        return int(self.Y.size + self.Z.size)


def _build_levels(n, delta, cfg, fp: FieldParams):
    levels = []
    for i in range(level_count(delta, cfg.rho)):
        s = (2 ** i) * cfg.rho
        rate = sample_rate(i, cfg.rho)
        if rate >= 1.0:
            members = np.arange(n, dtype=np.int64)
        else:
            members = np.flatnonzero(derive_rng(cfg.seed, "level", i).random(n) < rate).astype(np.int64)
        row_of = np.full(n, -1, dtype=np.int64)
        row_of[members] = np.arange(len(members))
        mseed = derive_seed(cfg.seed, "phiR", i)
        # closed neighborhoods: every sampled vertex starts with its own column
        Y = power_table(members + 1, 2 * s, fp.p) if len(members) else np.zeros((0, 2 * s), np.int64)
        Z = fingerprint_columns(mseed, cfg.t, members, fp.p) if len(members) else np.zeros((0, cfg.t), np.int64)
        levels.append(SketchLevel(i, s, rate, members, row_of, Y, Z, mseed))
    return levels


# ---------------------------------------------------------------- the pass

@dataclass
class SpaceReport:
    bytes_palettes: int
    bytes_sparsified: int
    bytes_sketches: int
    bytes_anchors: int
    bytes_other: int
    peak_total: int
    sketch_identity: int

    def as_dict(self):
        return dict(self.__dict__)


class StreamEngine:
    """State of the single pass.  Feed edges, then call :meth:`finalize`."""

    def __init__(self, n: int, delta: int, cfg: Optional[RunConfig] = None):
        cfg = cfg or RunConfig()
        self.cfg = cfg if cfg.resolved else cfg.resolve(n, delta)
        self.n = int(n)
        self.delta = int(delta)
        self.degrees = np.zeros(self.n, dtype=np.int64)
        self.edges_seen = 0
        self._bu: List[int] = []
        self._bv: List[int] = []
        self.fallback = self.delta < self.cfg.fallback_delta
        self.palettes = None
        if not self.fallback:
            try:
                self.palettes = sample_palettes(self.n, self.delta, self.cfg)
            except DegenerateRates:
                self.fallback = True
        self._all_edges: List[np.ndarray] = []
        self._sparsified: List[np.ndarray] = []
        self._anchor_edges: List[np.ndarray] = []
        self.levels: List[SketchLevel] = []
        self.field = choose_prime(max(self.n, 2), self.cfg.c_prime)
        if not self.fallback:
            self.anchor_rate = anchor_rate(self.n, self.delta, self.cfg.epsilon, self.cfg.beta)
            if self.anchor_rate >= 1.0:
                self.is_anchor = np.ones(self.n, dtype=bool)
            else:
                self.is_anchor = derive_rng(self.cfg.seed, "anchor").random(self.n) < self.anchor_rate
            self.levels = _build_levels(self.n, self.delta, self.cfg, self.field)
        else:
            self.anchor_rate = 0.0
            self.is_anchor = np.zeros(self.n, dtype=bool)
        self._counts = {"sparsified": 0, "anchors": 0, "all": 0}
        self._peak = 0
        self._update_peak()

    # -- accounting
    def _words(self):
        pal = self.palettes.words if self.palettes is not None else 0
        sk = sum(l.words for l in self.levels)
        anchors = 2 * self._counts["anchors"] + int(self.is_anchor.sum())
        other = self.n + 2 * self.cfg.flush_size + 2 * self._counts["all"]
        return pal, 2 * self._counts["sparsified"], sk, anchors, other

    def _update_peak(self):
        self._peak = max(self._peak, sum(self._words()))

    def space_report(self) -> SpaceReport:
        pal, spw, sk, anc, other = self._words()
        ident = sum(len(l.members) * (2 * l.s + self.cfg.t) for l in self.levels)
        return SpaceReport(pal * WORD_BYTES, spw * WORD_BYTES, sk * WORD_BYTES, anc * WORD_BYTES,
                           other * WORD_BYTES, self._peak * WORD_BYTES, ident * WORD_BYTES)

    # -- updates
    def process_edge(self, u: int, v: int) -> None:
        self._bu.append(int(u))
        self._bv.append(int(v))
        if len(self._bu) >= self.cfg.flush_size:
            self.flush()

    def process_edges(self, edges) -> None:
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.flush()
        step = self.cfg.flush_size
        for start in range(0, len(arr), step):
            self._apply(arr[start:start + step, 0], arr[start:start + step, 1])

    def flush(self) -> None:
        if self._bu:
            us = np.asarray(self._bu, dtype=np.int64)
            vs = np.asarray(self._bv, dtype=np.int64)
            self._bu.clear()
            self._bv.clear()
            self._apply(us, vs)

    def _apply(self, us: np.ndarray, vs: np.ndarray) -> None:
        if len(us) == 0:
            return
        self.edges_seen += len(us)
        np.add.at(self.degrees, us, 1)
        np.add.at(self.degrees, vs, 1)
        lo, hi = np.minimum(us, vs), np.maximum(us, vs)
        if self.fallback:
            self._all_edges.append(np.stack([lo, hi], axis=1))
            self._counts["all"] += len(us)
            self._update_peak()
            return
        keep = self.palettes.intersects(us, vs)
        if keep.any():
            self._sparsified.append(np.stack([lo[keep], hi[keep]], axis=1))
            self._counts["sparsified"] += int(keep.sum())
        anc = self.is_anchor[us] | self.is_anchor[vs]
        if anc.any():
            self._anchor_edges.append(np.stack([lo[anc], hi[anc]], axis=1))
            self._counts["anchors"] += int(anc.sum())
        p = self.field.p
        for lvl in self.levels:
            for a, b in ((us, vs), (vs, us)):
                rows = lvl.row_of[a]
                sel = rows >= 0
                if not sel.any():
                    continue
                r, other = rows[sel], b[sel]
                self._accumulate(lvl.Y, r, power_table(other + 1, 2 * lvl.s, p), p)
                self._accumulate(lvl.Z, r, fingerprint_columns(lvl.matrix_seed, self.cfg.t, other, p), p)
        self._update_peak()

    @staticmethod
    def _accumulate(target, rows, vals, p):
        # sums of up to `step` values below p stay below 2^63
        step = max(1, ((1 << 63) - 1) // p - 1)
        for start in range(0, len(rows), step):
            np.add.at(target, rows[start:start + step], vals[start:start + step])
            np.remainder(target, p, out=target)

    # -- views
    def _stacked(self, chunks):
        if not chunks:
            return np.zeros((0, 2), dtype=np.int64)
        arr = np.concatenate(chunks)
        order = np.lexsort((arr[:, 1], arr[:, 0]))
        return arr[order]

    def sparsified_edges(self) -> np.ndarray:
        return self._stacked(self._sparsified)

    def anchor_edges(self) -> np.ndarray:
        return self._stacked(self._anchor_edges)

    def stored_edges(self) -> np.ndarray:
        return self._stacked(self._all_edges)

    # -- checkpoints for protocol simulation
    def snapshot_state(self) -> bytes:
        """Serialized live state; its length is the message size."""
        self.flush()
        import pickle
        blob = {
            "n": self.n, "delta": self.delta, "cfg": self.cfg.as_dict(),
            "degrees": self.degrees, "edges_seen": self.edges_seen,
            "all": self.stored_edges(), "sp": self.sparsified_edges(), "anc": self.anchor_edges(),
            "levels": [(l.Y, l.Z) for l in self.levels],
        }
        return pickle.dumps(blob, protocol=4)

    @classmethod
    def resume(cls, data: bytes) -> "StreamEngine":
        import pickle
        blob = pickle.loads(data)
        eng = cls(blob["n"], blob["delta"], RunConfig(**blob["cfg"]))
        eng.degrees = blob["degrees"]
        eng.edges_seen = blob["edges_seen"]
        for key, store, cnt in (("all", eng._all_edges, "all"), ("sp", eng._sparsified, "sparsified"),
                                ("anc", eng._anchor_edges, "anchors")):
            if len(blob[key]):
                store.append(blob[key])
            eng._counts[cnt] = len(blob[key])
        for lvl, (Y, Z) in zip(eng.levels, blob["levels"]):
            lvl.Y, lvl.Z = Y, Z
        eng._update_peak()
        return eng

    def finalize(self, oracle_graph=None) -> "StreamSummary":
        """End of pass: decomposition, neighborhood recovery, classification."""
        self.flush()
        return build_summary(self, oracle_graph)


# ---------------------------------------------------------------- recovery

@dataclass
class Recovery:
    anti: frozenset
    ext: frozenset
    level: int


def _clique_vectors(lvl: SketchLevel, C, p, t):
    sup = {int(u): 1 for u in C}
    return encode(sup, 2 * lvl.s, p), fingerprint_of(lvl.matrix_seed, t, sup, p)


def recover_vertex(engine: StreamEngine, v: int, C, cache=None) -> Optional[Recovery]:
    """Recover ``A(v)`` and ``E(v)`` relative to ``C`` at the first level that certifies."""
    p = engine.field.p
    t = engine.cfg.t
    cset = set(int(u) for u in C)
    for lvl in engine.levels:
        row = lvl.row_of[v]
        if row < 0:
            continue
        key = (lvl.index, id(C))
        if cache is not None and key in cache:
            syn_c, fp_c = cache[key]
        else:
            syn_c, fp_c = _clique_vectors(lvl, C, p, t)
            if cache is not None:
                cache[key] = (syn_c, fp_c)
        syn = (syn_c - lvl.Y[row]) % p
        fp = (fp_c - lvl.Z[row]) % p
        dec = decode_syndromes(syn, engine.n, p)
        if dec is None:
            continue
        if any(c not in (1, p - 1) for c in dec.values()):
            continue
        cand = {j: (1 if c == 1 else -1) for j, c in dec.items()}
        if not np.array_equal(fingerprint_of(lvl.matrix_seed, t, cand, p), fp):
            continue
        anti = frozenset(j for j, c in cand.items() if c == 1)
        ext = frozenset(j for j, c in cand.items() if c == -1)
        if v in anti or not anti <= cset or ext & cset:
            continue
        return Recovery(anti, ext, lvl.index)
    return None


def recover_dense_neighborhoods(engine: StreamEngine, dec: Decomposition) -> Dict[int, Recovery]:
    out: Dict[int, Recovery] = {}
    cache: dict = {}
    for C in dec.cliques:
        for v in C:
            r = recover_vertex(engine, int(v), C, cache)
            if r is not None:
                out[int(v)] = r
    return out


# ---------------------------------------------------------------- summary

@dataclass
class StreamSummary:
    n: int
    delta: int
    cfg: RunConfig
    fallback: bool
    palettes: Optional[PaletteLists]
    sparsified: np.ndarray
    stored: np.ndarray
    degrees: np.ndarray
    decomposition: Optional[Decomposition]
    recovered: Dict[int, Recovery]
    cliques: list
    space: SpaceReport
    engine: StreamEngine = field(repr=False, default=None)

    def known_neighborhood(self, v: int) -> Optional[frozenset]:
        r = self.recovered.get(v)
        if r is None:
            return None
        ci = int(self.decomposition.clique_of[v])
        C = self.cliques[ci].members
        return frozenset((set(C) - r.anti - {v}) | r.ext)

    def report_dict(self) -> dict:
        return {
            "n": self.n, "delta": self.delta, "fallback": self.fallback,
            "field_prime": self.engine.field.p if self.engine else None,
            "levels": [{"index": l.index, "s": l.s, "rate": l.rate, "sampled": int(len(l.members))}
                       for l in (self.engine.levels if self.engine else [])],
            "anchor_rate": self.engine.anchor_rate if self.engine else None,
            "edges_seen": int(self.engine.edges_seen) if self.engine else None,
            "sparsified_edges": int(len(self.sparsified)),
            "recovered": len(self.recovered),
            "space": self.space.as_dict(),
            "config": self.cfg.as_dict(),
        }

    def save(self, directory) -> None:
        """Write the summary as a directory of deterministic files."""
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "palettes.bin"), "wb") as fh:
            if self.palettes is not None:
                fh.write(self.palettes.to_bytes())
        with open(os.path.join(directory, "sparsified.edges"), "w", encoding="ascii", newline="\n") as fh:
            edges = self.stored if self.fallback else self.sparsified
            for u, v in edges:
                fh.write(f"{u} {v}\n")
        with open(os.path.join(directory, "decomposition.json"), "w", encoding="utf-8") as fh:
            json.dump(self.decomposition_dict(), fh, sort_keys=True, indent=1)
        with open(os.path.join(directory, "sketches.bin"), "wb") as fh:
            fh.write(self.sketch_bytes())
        with open(os.path.join(directory, "report.json"), "w", encoding="utf-8") as fh:
            json.dump(self.report_dict(), fh, sort_keys=True, indent=1)

    def decomposition_dict(self) -> dict:
        if self.decomposition is None:
            return {"fallback": True}
        rec = {str(v): {"A": sorted(r.anti), "E": sorted(r.ext), "level": r.level}
               for v, r in sorted(self.recovered.items())}
        return {"sparse": list(map(int, self.decomposition.sparse)),
                "cliques": [c.as_dict() for c in self.cliques],
                "recovered": rec}

    def sketch_bytes(self) -> bytes:
        eng = self.engine
        if eng is None:
            return b""
        out = []
        for l in eng.levels:
            out.append(struct.pack("<QQQQ", eng.field.p, l.s, eng.cfg.t, l.matrix_seed))
            out.append(l.members.astype("<u8").tobytes())
            out.append(l.Y.astype("<u8").tobytes())
            out.append(l.Z.astype("<u8").tobytes())
        return b"".join(out)


def build_summary(engine: StreamEngine, oracle_graph=None) -> StreamSummary:
    from .structure import analyze_cliques

    space = engine.space_report()
    if engine.fallback:
        return StreamSummary(engine.n, engine.delta, engine.cfg, True, None,
                             np.zeros((0, 2), np.int64), engine.stored_edges(), engine.degrees,
                             None, {}, [], space, engine)
    cfg = engine.cfg
    if cfg.acd_mode == "oracle":
        if oracle_graph is None:
            raise ValueError("oracle decomposition needs the full graph")
        from .decomposition import decompose_exact
        dec = decompose_exact(oracle_graph.with_delta(engine.delta), cfg.epsilon)
    else:
        dec = estimate_decomposition(engine.n, engine.delta, cfg.epsilon, engine.anchor_edges(),
                                     engine.is_anchor, engine.anchor_rate, engine.degrees)
    recovered = recover_dense_neighborhoods(engine, dec)
    summary = StreamSummary(engine.n, engine.delta, cfg, False, engine.palettes,
                            engine.sparsified_edges(), np.zeros((0, 2), np.int64), engine.degrees,
                            dec, recovered, [], space, engine)
    summary.cliques = analyze_cliques(summary)
    missing = [c.index for c in summary.cliques if c.needs_helper and c.helper is None]
    if missing:
        raise RecoveryIncomplete(
            f"no certified helper for solitary cliques {missing}", step="stream",
            clique=missing[0], witness={"cliques": missing})
    return summary


def run_pass(stream, cfg: Optional[RunConfig] = None, oracle_graph=None) -> StreamSummary:
    """Consume an :class:`~streamchroma.graph.EdgeStream` once and finalize."""
    eng = StreamEngine(stream.n, stream.delta, cfg)
    for u, v in stream:
        eng.process_edge(u, v)
    return eng.finalize(oracle_graph)


__all__ = [
    "PaletteLists", "sample_palettes", "SketchLevel", "StreamEngine", "SpaceReport",
    "Recovery", "recover_vertex", "recover_dense_neighborhoods", "StreamSummary",
    "build_summary", "run_pass", "derive_rng", "derive_seed", "WORD_BYTES",
]

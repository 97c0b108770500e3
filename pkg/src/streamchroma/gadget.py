"""Lower-bound gadget: encode a bit string so that a proper ``c``-coloring
reveals any chosen bit, and a one-way protocol harness around a streaming
colorer.

Block ``q`` holds four sides ``A, B, Abar, Bbar`` of ``delta`` vertices and a
``(c-3)``-clique ``C``.  Bit ``j`` sits on edge ``e_r`` of a circulant
``(delta-c+1)``-regular bipartite pairing graph: a one puts the edge between
``A`` and ``B``, a zero between ``Abar`` and ``Bbar``.  Bob's edges turn the
four endpoints of the queried pair plus ``C`` into a ``(c+1)``-clique with
one edge missing, whose endpoints every ``c``-coloring must same-color.
"""
from __future__ import annotations

import pickle
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ParameterViolation, Undecodable
from .graph import Graph

SIDES = ("A", "B", "Abar", "Bbar", "C")


@dataclass
class IndexInstance:
    x: Tuple[int, ...]
    i: int  # 1-based

    @property
    def m(self) -> int:
        return len(self.x)

    @classmethod
    def from_string(cls, bits: str, i: int) -> "IndexInstance":
        return cls(tuple(int(b) for b in bits.strip()), i)

    @classmethod
    def from_hex(cls, hexstr: str, m: int, i: int) -> "IndexInstance":
        val = int(hexstr, 16)
        bits = [(val >> (m - 1 - k)) & 1 for k in range(m)]
        return cls(tuple(bits), i)

    @classmethod
    def random(cls, m: int, rng) -> "IndexInstance":
        return cls(tuple(int(b) for b in rng.integers(0, 2, size=m)), int(rng.integers(1, m + 1)))


@dataclass
class GadgetLayout:
    delta: int
    c: int
    g: int
    t: int
    pairs: List[Tuple[int, int]]  # e_1..e_t as (x, y), both 1-based
    block_size: int

    @property
    def n(self) -> int:
        return self.g * self.block_size

    def vertex(self, q: int, side: str, k: int) -> int:
        """Vertex id of the ``k``-th (1-based) member of ``side`` in block ``q``."""
        off = {"A": 0, "B": 1, "Abar": 2, "Bbar": 3}
        if side == "C":
            return q * self.block_size + 4 * self.delta + k - 1
        return q * self.block_size + off[side] * self.delta + k - 1

    def side(self, q: int, name: str) -> List[int]:
        size = self.c - 3 if name == "C" else self.delta
        return [self.vertex(q, name, k) for k in range(1, size + 1)]

    def locate(self, j: int) -> Tuple[int, int]:
        """Bit ``j`` (1-based) lives in block ``q`` on pair ``r``: ``j = t q + r``."""
        q, r = divmod(j - 1, self.t)
        return q, r + 1

    def designated(self, i: int) -> Dict[str, int]:
        q, r = self.locate(i)
        x, y = self.pairs[r - 1]
        return {"q": q, "a": self.vertex(q, "A", x), "b": self.vertex(q, "B", y),
                "abar": self.vertex(q, "Abar", x), "bbar": self.vertex(q, "Bbar", y)}


def check_parameters(delta: int, c: int, m: int) -> None:
    if not (delta + 1) / 2 < c <= delta:
        raise ParameterViolation(f"need (delta+1)/2 < c <= delta, got delta={delta}, c={c}")
    if c < 3:
        raise ParameterViolation("c must be at least 3")
    t = delta * (delta - c + 1)
    if m <= 0 or m % t:
        raise ParameterViolation(f"m={m} is not a positive multiple of {t}")


def pairing_graph(delta: int, c: int) -> List[Tuple[int, int]]:
    """Circulant regular bipartite graph: left ``x`` meets right ``x + s``
    (mod ``delta``) for ``s`` in ``0..delta-c``, numbered row by row."""
    out = []
    for x in range(1, delta + 1):
        for s in range(delta - c + 1):
            out.append((x, (x - 1 + s) % delta + 1))
    return out


def gadget_edges(delta: int, c: int, inst: IndexInstance):
    """Alice's and Bob's edge lists, in protocol order."""
    check_parameters(delta, c, inst.m)
    t = delta * (delta - c + 1)
    layout = GadgetLayout(delta, c, inst.m // t, t, pairing_graph(delta, c), 4 * delta + c - 3)
    if not 1 <= inst.i <= inst.m:
        raise ParameterViolation(f"index {inst.i} outside 1..{inst.m}")
    alice = []
    for q in range(layout.g):
        C = layout.side(q, "C")
        alice += [(C[a], C[b]) for a in range(len(C)) for b in range(a + 1, len(C))]
    for j in range(1, inst.m + 1):
        q, r = layout.locate(j)
        x, y = layout.pairs[r - 1]
        if inst.x[j - 1]:
            alice.append((layout.vertex(q, "A", x), layout.vertex(q, "B", y)))
        else:
            alice.append((layout.vertex(q, "Abar", x), layout.vertex(q, "Bbar", y)))
    d = layout.designated(inst.i)
    four = (d["a"], d["b"], d["abar"], d["bbar"])
    bob = [(u, w) for u in four for w in layout.side(d["q"], "C")]
    bob += [(d["a"], d["abar"]), (d["a"], d["bbar"]), (d["b"], d["abar"]), (d["b"], d["bbar"])]
    return layout, alice, bob


def build_gadget(delta: int, c: int, inst: IndexInstance) -> Tuple[Graph, GadgetLayout]:
    layout, alice, bob = gadget_edges(delta, c, inst)
    g = Graph.from_edges(layout.n, alice + bob, delta=delta)
    if g.max_degree() > delta:
        raise ParameterViolation(f"gadget degree {g.max_degree()} exceeds {delta}")
    return g, layout


def designated_clique(layout: GadgetLayout, i: int) -> List[int]:
    d = layout.designated(i)
    return [d["a"], d["b"], d["abar"], d["bbar"]] + layout.side(d["q"], "C")


def decode_bit(g: Graph, layout: GadgetLayout, coloring, i: int) -> int:
    """``1`` when the ``Abar``/``Bbar`` endpoints share a color, ``0`` when
    the ``A``/``B`` endpoints do."""
    d = layout.designated(i)
    col = np.asarray(coloring)
    for u, w in g.induced_edges(designated_clique(layout, i)):
        if col[u] == col[w] or col[u] == 0:
            raise Undecodable(f"coloring is not proper on the designated clique at edge ({u}, {w})")
    one = col[d["abar"]] == col[d["bbar"]]
    zero = col[d["a"]] == col[d["b"]]
    if one == zero:
        raise Undecodable("neither or both designated pairs share a color")
    return 1 if one else 0


# ---------------------------------------------------------------- protocol

class StoreAllColorer:
    """Keeps every edge and colors exactly at the end."""

    name = "storeall"

    def __init__(self, n: int, delta: int, q: int):
        self.n, self.delta, self.q = n, delta, q
        self.edges: List[Tuple[int, int]] = []

    def process_edge(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def snapshot_state(self) -> bytes:
        arr = np.asarray(self.edges, dtype="<u4").reshape(-1, 2)
        return pickle.dumps((self.n, self.delta, self.q, arr.tobytes()), protocol=4)

    @classmethod
    def resume(cls, data: bytes) -> "StoreAllColorer":
        n, delta, q, raw = pickle.loads(data)
        obj = cls(n, delta, q)
        obj.edges = [tuple(map(int, e)) for e in np.frombuffer(raw, dtype="<u4").reshape(-1, 2)]
        return obj

    def output_coloring(self):
        from .oracles import exact_color

        res = exact_color(Graph.from_edges(self.n, self.edges), self.q)
        return res.colors


class DummyColorer:
    """Sends a constant message; Bob colors only the edges he sees."""

    name = "dummy"

    def __init__(self, n: int, delta: int, q: int, seed: int = 0):
        self.n, self.delta, self.q, self.seed = n, delta, q, seed
        self.edges: List[Tuple[int, int]] = []
        self.alice_done = False

    def process_edge(self, u: int, v: int) -> None:
        if self.alice_done:
            self.edges.append((u, v))

    def snapshot_state(self) -> bytes:
        self.alice_done = True
        return pickle.dumps((self.n, self.delta, self.q, self.seed), protocol=4)

    @classmethod
    def resume(cls, data: bytes) -> "DummyColorer":
        n, delta, q, seed = pickle.loads(data)
        obj = cls(n, delta, q, seed)
        obj.alice_done = True
        return obj

    def output_coloring(self):
        from .oracles import exact_color

        res = exact_color(Graph.from_edges(self.n, self.edges), self.q)
        if res.colors is None:
            return None
        # a random permutation of colors per vertex class keeps the guess unbiased
        rng = np.random.default_rng(self.seed)
        perm = np.concatenate([[0], rng.permutation(self.q) + 1])
        return perm[res.colors]


class StreamChromaColorer:
    """This package's one-pass engine; colors with ``delta - 1`` colors."""

    name = "streamchroma"

    def __init__(self, n: int, delta: int, q: int, cfg=None):
        from .config import RunConfig
        from .stream import StreamEngine

        if q != delta - 1:
            raise ParameterViolation("the engine produces (delta-1)-colorings; use c = delta - 1")
        self.engine = StreamEngine(n, delta, cfg or RunConfig())

    def process_edge(self, u: int, v: int) -> None:
        self.engine.process_edge(u, v)

    def snapshot_state(self) -> bytes:
        return self.engine.snapshot_state()

    @classmethod
    def resume(cls, data: bytes) -> "StreamChromaColorer":
        from .stream import StreamEngine

        obj = cls.__new__(cls)
        obj.engine = StreamEngine.resume(data)
        return obj

    def output_coloring(self):
        from .pipeline import run_pipeline

        res = run_pipeline(self.engine.finalize())
        return res.colors if res.status == "colored" else None


ALGORITHMS = {"storeall": StoreAllColorer, "dummy": DummyColorer, "streamchroma": StreamChromaColorer}


def simulate_protocol(alg: str, inst: IndexInstance, delta: int, c: int, seed: int = 0) -> dict:
    """Alice streams her edges and ships the state; Bob resumes, streams his
    edges, colors, and decodes."""
    layout, alice, bob = gadget_edges(delta, c, inst)
    cls = ALGORITHMS[alg]
    a = cls(layout.n, delta, c, seed) if alg == "dummy" else cls(layout.n, delta, c)
    for u, v in alice:
        a.process_edge(u, v)
    message = a.snapshot_state()
    b = cls.resume(message)
    for u, v in bob:
        b.process_edge(u, v)
    colors = b.output_coloring()
    g = Graph.from_edges(layout.n, alice + bob, delta=delta)
    guessed = False
    try:
        if colors is None:
            raise Undecodable("no coloring produced")
        bit = decode_bit(g, layout, colors, inst.i)
    except Undecodable:
        guessed = True
        bit = int(np.random.default_rng([seed, inst.i]).integers(2))
    return {"delta": delta, "c": c, "m": inst.m, "g": layout.g, "n": layout.n,
            "decoded": bit, "correct": bit == inst.x[inst.i - 1], "guessed": guessed,
            "message_bytes": len(message), "alice_edges": len(alice)}


def valid_cs(delta: int) -> List[int]:
    return [c for c in range(3, delta + 1) if (delta + 1) / 2 < c]


__all__ = [
    "IndexInstance", "GadgetLayout", "build_gadget", "decode_bit", "gadget_edges", "pairing_graph",
    "designated_clique", "simulate_protocol", "StoreAllColorer", "DummyColorer", "StreamChromaColorer",
    "ALGORITHMS", "check_parameters", "valid_cs",
]

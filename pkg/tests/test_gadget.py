import itertools

import numpy as np
import pytest

from streamchroma.errors import ParameterViolation, Undecodable
from streamchroma.gadget import (IndexInstance, build_gadget, decode_bit, designated_clique, gadget_edges,
                                 pairing_graph, simulate_protocol, valid_cs)
from streamchroma.oracles import exact_color

BLOCK_BITS = "10101011011000"


def test_single_block_instance_layout():
    g, lay = build_gadget(7, 6, IndexInstance.from_string(BLOCK_BITS, 1))
    assert lay.block_size == 4 * 7 + 6 - 3 == 31
    assert lay.t == 14 and lay.g == 1 and g.n == 31
    assert g.max_degree() <= 7
    assert len(pairing_graph(7, 6)) == 14


def test_pairing_graph_is_regular():
    for d in range(7, 13):
        for c in valid_cs(d):
            P = pairing_graph(d, c)
            for side in (0, 1):
                counts = np.bincount([p[side] for p in P], minlength=d + 1)[1:]
                assert set(counts) == {d - c + 1}


def test_bad_parameters():
    with pytest.raises(ParameterViolation):
        build_gadget(7, 3, IndexInstance((0,) * 35, 1))
    with pytest.raises(ParameterViolation):
        build_gadget(7, 6, IndexInstance((0,) * 13, 1))
    with pytest.raises(ParameterViolation):
        build_gadget(7, 6, IndexInstance((0,) * 14, 15))


def test_every_coloring_of_the_designated_clique_reveals_the_bit():
    for bit in (0, 1):
        bits = "0" * 13 + str(bit)
        inst = IndexInstance.from_string(bits, 14)
        g, lay = build_gadget(7, 6, inst)
        D = designated_clique(lay, 14)
        sub = g.induced_edges(D)
        assert len(D) == 7 and len(sub) == 7 * 6 // 2 - 1
        pos = {v: k for k, v in enumerate(D)}
        ea = np.array([[pos[u], pos[w]] for u, w in sub])
        cols = np.array(list(itertools.product(range(6), repeat=7)), dtype=np.int8)
        proper = cols[np.all(cols[:, ea[:, 0]] != cols[:, ea[:, 1]], axis=1)]
        assert len(proper) > 0
        d = lay.designated(14)
        pair = (d["abar"], d["bbar"]) if bit else (d["a"], d["b"])
        assert np.all(proper[:, pos[pair[0]]] == proper[:, pos[pair[1]]])


def test_decoding_from_exact_coloring():
    rng = np.random.default_rng(0)
    for d, c in ((7, 6), (8, 5), (9, 7)):
        t = d * (d - c + 1)
        for _ in range(5):
            inst = IndexInstance.random(2 * t, rng)
            g, lay = build_gadget(d, c, inst)
            r = exact_color(g, c)
            assert decode_bit(g, lay, r.colors, inst.i) == inst.x[inst.i - 1]


def test_decode_rejects_improper():
    g, lay = build_gadget(7, 6, IndexInstance.from_string(BLOCK_BITS, 1))
    with pytest.raises(Undecodable):
        decode_bit(g, lay, np.ones(g.n, dtype=int), 1)


def test_protocols():
    rng = np.random.default_rng(1)
    inst = IndexInstance.random(28, rng)
    out = simulate_protocol("storeall", inst, 7, 6)
    assert out["correct"] and not out["guessed"]
    dummy = [simulate_protocol("dummy", IndexInstance.random(28, rng), 7, 6, seed=s) for s in range(10)]
    assert all(o["message_bytes"] < 100 for o in dummy)


def test_alice_and_bob_split():
    layout, alice, bob = gadget_edges(7, 6, IndexInstance.from_string(BLOCK_BITS, 3))
    assert len(bob) == 4 * 3 + 4
    assert len(alice) == 3 + 14

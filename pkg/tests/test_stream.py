import filecmp
import itertools
import os

import numpy as np
import pytest

from streamchroma.config import RunConfig
from streamchroma.decomposition import decompose_exact
from streamchroma.field import decode_syndromes, encode, signed
from streamchroma.generators import disjoint_cliques, gen_random_graph, gen_sparse_random_graph
from streamchroma.graph import EdgeStream, Graph
from streamchroma.oracles import check_acd
from streamchroma.stream import StreamEngine, run_pass, sample_palettes

from conftest import planted, summarize


def test_palettes_are_deterministic_and_clamped():
    cfg = RunConfig(seed=3).resolve(200, 40)
    a, b = sample_palettes(200, 40, cfg), sample_palettes(200, 40, cfg)
    assert a.to_bytes() == b.to_bytes()
    full = RunConfig(seed=3, rate_L6=1.0).resolve(50, 20)
    pal = sample_palettes(50, 20, full)
    assert all(pal.get(6, v).tolist() == list(range(1, 20)) for v in range(50))
    assert all(1 <= pal.L2[v] <= 19 for v in range(50))


def test_list_size_matches_rate():
    cfg = RunConfig(seed=1, rate_L4=0.05).resolve(4000, 1001)
    pal = sample_palettes(4000, 1001, cfg)
    mean = np.mean([pal.size(4, v) for v in range(4000)])
    assert abs(mean - 50) < 0.05 * 50


def test_edge_with_disjoint_lists_is_not_stored():
    cfg = RunConfig(seed=0, rate_L3=0.0, rate_L4=0.0, rate_L5=0.0, rate_L6=0.0, beta=1e-9)
    eng = StreamEngine(1000, 900, cfg)
    pal = eng.palettes
    u, v = next((a, b) for a in range(1000) for b in range(a + 1, 1000)
                if not pal.intersects(np.array([a]), np.array([b]))[0]
                and not eng.is_anchor[a] and not eng.is_anchor[b])
    eng.process_edge(u, v)
    eng.flush()
    assert len(eng.sparsified_edges()) == 0 and len(eng.anchor_edges()) == 0
    assert eng.edges_seen == 1


def test_k10_recovery_identity():
    g = disjoint_cliques(1, 10, delta=9)
    eng = StreamEngine(10, 9, RunConfig(seed=2, fallback_delta=2))
    eng.process_edges(list(g.edges()))
    eng.flush()
    lvl = eng.levels[0]
    p = eng.field.p
    for v in lvl.members[:3]:
        row = lvl.row_of[v]
        syn = (encode({u: 1 for u in range(10)}, 2 * lvl.s, p) - lvl.Y[row]) % p
        assert decode_syndromes(syn, 10, p) == {}


def test_recovered_sets_match_truth(planted32):
    g, _, s = planted32
    for v, r in s.recovered.items():
        C = set(s.cliques[int(s.decomposition.clique_of[v])].members)
        nv = g.neighbor_set(v)
        assert r.anti == frozenset(C - nv - {v})
        assert r.ext == frozenset(nv - C)
        assert s.known_neighborhood(v) == nv


def test_disjoint_cliques_decompose_into_themselves():
    g = disjoint_cliques(4, 33, delta=32)
    s = run_pass(EdgeStream.from_graph(g), RunConfig(seed=0))
    assert sorted(sorted(c) for c in s.decomposition.cliques) == [list(range(33 * i, 33 * i + 33)) for i in range(4)]
    assert len(s.decomposition.sparse) == 0
    assert check_acd(g, s.decomposition.sparse, s.decomposition.cliques, 0.5, 0.85, 0.85) == []


def test_dense_random_graph_is_all_sparse():
    g = gen_random_graph(200, 130, 0.5, 4)
    dec = decompose_exact(g, 0.3)
    assert len(dec.cliques) == 0 and len(dec.sparse) == 200


def test_empty_graph():
    g = Graph.from_edges(100, [], delta=20)
    s = run_pass(EdgeStream.from_graph(g), RunConfig(seed=0))
    assert len(s.decomposition.sparse) == 100 and not s.cliques
    assert s.space.bytes_sparsified == 0


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_decompositions_pass_check_acd(seed):
    g, _ = planted(32, seed)
    est = summarize(g, seed)
    cfg = est.cfg
    d = est.decomposition
    # estimator output: relaxed thresholds
    assert check_acd(g, d.sparse, d.cliques, cfg.eta / 2, cfg.epsilon, cfg.epsilon / 2) == []
    orc = run_pass(EdgeStream.from_graph(g), RunConfig(seed=seed, acd_mode="oracle"), g)
    d = orc.decomposition
    assert check_acd(g, d.sparse, d.cliques, cfg.eta, cfg.epsilon, cfg.epsilon / 2) == []


def test_space_identity_and_meter():
    g = gen_sparse_random_graph(2000, 32, 6, 0)
    eng = StreamEngine(2000, 32, RunConfig(seed=0))
    eng.process_edges(list(g.edges()))
    eng.flush()
    rep = eng.space_report()
    assert rep.bytes_sketches == rep.sketch_identity
    assert rep.peak_total >= rep.bytes_sketches + rep.bytes_palettes


def test_order_invariance(tmp_path, planted32):
    g, _, _ = planted32
    edges = list(g.edges())
    dirs = []
    for k in range(3):
        order = np.random.default_rng(k).permutation(len(edges))
        s = run_pass(EdgeStream(g.n, g.delta, [edges[i] for i in order]), RunConfig(seed=1))
        d = tmp_path / f"s{k}"
        s.save(str(d))
        dirs.append(d)
    files = sorted(os.listdir(dirs[0]))
    match, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], files, shallow=False)
    assert mismatch == [] and errors == []
    match, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[2], files, shallow=False)
    assert mismatch == [] and errors == []


def test_snapshot_resume_equals_straight_run(planted32):
    g, _, _ = planted32
    edges = list(g.edges())
    half = len(edges) // 2
    a = StreamEngine(g.n, g.delta, RunConfig(seed=1))
    a.process_edges(edges[:half])
    b = StreamEngine.resume(a.snapshot_state())
    b.process_edges(edges[half:])
    straight = StreamEngine(g.n, g.delta, RunConfig(seed=1))
    straight.process_edges(edges)
    assert b.finalize().sketch_bytes() == straight.finalize().sketch_bytes()


def test_small_delta_takes_fallback():
    g = gen_random_graph(30, 4, 0.3, 0)
    s = run_pass(EdgeStream.from_graph(g), RunConfig(seed=0))
    assert s.fallback and len(s.stored) == g.m

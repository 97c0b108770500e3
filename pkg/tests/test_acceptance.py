"""Acceptance criteria 1 to 11, one recorded PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines appear in
the terminal summary.  Full-scale runs take several minutes.
"""
import collections
import math
import os
import time

import numpy as np
import pytest

from streamchroma import stats
from streamchroma.choosable import (_adj_from_edges, adversarial_lists, choosable_color, is_list_colorable,
                                    pair_instance, random_lists, triple_instance)
from streamchroma.cli import bench_memory
from streamchroma.config import RunConfig
from streamchroma.errors import PipelineFailure, ShapeMismatch
from streamchroma.field import (FingerprintSketch, choose_prime, decode_sparse, decode_syndromes, encode,
                                fingerprint_of, signed, sketch_add, VandermondeSketch)
from streamchroma.gadget import (IndexInstance, build_gadget, decode_bit, designated_clique, valid_cs)
from streamchroma.generators import disjoint_cliques, gen_random_graph, gen_sparse_random_graph
from streamchroma.graph import EdgeStream, verify_coloring
from streamchroma.oracles import brute_force_recover, exact_color, wilson_interval
from streamchroma.pipeline import check_serene, run_pipeline
from streamchroma.pipeline.context import Ctx
from streamchroma.pipeline.matching import (find_L_perfect_matching, palette_conditions, random_palette_graph,
                                            sample_edges, sampling_rate)
from streamchroma.pipeline.reed import check_rt_invariants, step1_preprocess, step1_reed_transform
from streamchroma.stream import run_pass

from conftest import FIXTURES, planted, record


def _random_sparse(rng, n, k):
    supp = rng.choice(n, size=k, replace=False)
    return {int(j): int(s) for j, s in zip(supp, rng.choice([-1, 1], size=k))}


# ---------------------------------------------------------------- 1

def test_c1_sparse_recovery_exact():
    n = 10_000
    fp = choose_prime(n, 3)
    assert fp.p >= n ** 3
    rng = np.random.default_rng(0)
    t0 = time.time()
    per_k = {}
    for k in (1, 2, 4, 8, 16, 32, 64):
        ok = 0
        for _ in range(1000):
            x = _random_sparse(rng, n, k)
            sk = VandermondeSketch(k, fp)
            for j, c in x.items():
                sketch_add(sk, j, c)
            d = decode_sparse(sk)
            # second route: re-encode the decoded vector and compare syndromes
            ok += d == x and np.array_equal(encode(d, 2 * k, fp.p), sk.rows % fp.p)
        per_k[k] = ok
    elapsed = time.time() - t0
    passed = all(v == 1000 for v in per_k.values()) and elapsed < 60
    record(1, passed, f"exact per k {per_k}, {elapsed:.1f}s")
    assert passed


# ---------------------------------------------------------------- 2

def test_c2_decoder_matches_brute_force():
    rng = np.random.default_rng(1)
    disagree = 0
    for _ in range(1000):
        n = int(rng.integers(4, 31))
        k = int(rng.integers(1, 4))
        p = choose_prime(n, 3).p
        x = _random_sparse(rng, n, int(rng.integers(1, k + 1)))
        S = encode(x, 2 * k, p)
        d = decode_syndromes(S, n, p)
        d = {j: signed(c, p) for j, c in d.items()} if d is not None else None
        disagree += d != brute_force_recover(S, k, n, p)
    record(2, disagree == 0, f"{disagree} disagreements in 1000 trials")
    assert disagree == 0


# ---------------------------------------------------------------- 3

def _perturb(x, n, rng):
    y = dict(x)
    j = int(rng.choice(list(y)))
    kind = int(rng.integers(4))
    if kind == 0:
        y[j] = -y[j]
    elif kind == 1:
        del y[j]
    elif kind == 2:
        new = int(rng.integers(n))
        while new in y:
            new = int(rng.integers(n))
        y[new] = y.pop(j)
    else:
        new = int(rng.integers(n))
        while new in y:
            new = int(rng.integers(n))
        y[new] = int(rng.choice([-1, 1]))
    return y


def test_c3_fingerprint_soundness():
    n, t = 10_000, 3
    fp = choose_prime(n, 3)
    rng = np.random.default_rng(2)
    false_accepts, trials = 0, 100_000
    for b in range(trials // 100):
        x = _random_sparse(rng, n, int(rng.integers(1, 9)))
        f = FingerprintSketch(t, fp, matrix_seed=1000 + b)
        for j, c in x.items():
            f.add(j, c)
        for _ in range(100):
            y = _perturb(x, n, rng)
            false_accepts += np.array_equal(fingerprint_of(f.matrix_seed, t, y, fp.p), f.rows)
    record(3, false_accepts == 0, f"{false_accepts} false accepts in {trials} (p={fp.p}, t={t})")
    assert false_accepts == 0


# ---------------------------------------------------------------- 4

def test_c4_palette_graph_matching():
    k, delta_fail = 500, 0.01
    rate = sampling_rate(k, delta_fail)
    rng = np.random.default_rng(3)
    ok = cond = 0
    for _ in range(200):
        pg = random_palette_graph(k, rng)
        cond += all(palette_conditions(pg).values())
        ok += find_L_perfect_matching(sample_edges(pg, rate, rng)) is not None
    passed = cond == 200 and ok >= 195
    record(4, passed, f"{ok}/200 matched at rate {rate:.4f}; conditions held {cond}/200")
    assert passed


# ---------------------------------------------------------------- 5

def test_c5_lower_bound_gadget():
    rng = np.random.default_rng(4)
    rows = {}
    for d in range(7, 13):
        for c in valid_cs(d):
            t = d * (d - c + 1)
            good = 0
            for _ in range(100):
                inst = IndexInstance.random(t, rng)
                g, lay = build_gadget(d, c, inst)
                r = exact_color(g, c)
                good += (g.max_degree() <= d and r.sat and verify_coloring(g, r.colors, c).ok
                         and decode_bit(g, lay, r.colors, inst.i) == inst.x[inst.i - 1])
            rows[(d, c)] = good
    # every proper 6-coloring of the designated K7-minus-edge same-colors the missing pair
    import itertools
    exhaustive = True
    for bit in (0, 1):
        inst = IndexInstance.from_string("0" * 13 + str(bit), 14)
        g, lay = build_gadget(7, 6, inst)
        D = designated_clique(lay, 14)
        pos = {v: k for k, v in enumerate(D)}
        ea = np.array([[pos[u], pos[w]] for u, w in g.induced_edges(D)])
        cols = np.array(list(itertools.product(range(6), repeat=7)), dtype=np.int8)
        proper = cols[np.all(cols[:, ea[:, 0]] != cols[:, ea[:, 1]], axis=1)]
        dd = lay.designated(14)
        a, b = (dd["abar"], dd["bbar"]) if bit else (dd["a"], dd["b"])
        exhaustive &= len(proper) > 0 and bool(np.all(proper[:, pos[a]] == proper[:, pos[b]]))
    g, lay = build_gadget(7, 6, IndexInstance.from_string("10101011011000", 1))
    fig_ok = lay.block_size == 31 and g.n == 31 and lay.t == 14
    passed = all(v == 100 for v in rows.values()) and exhaustive and fig_ok
    bad = {k: v for k, v in rows.items() if v != 100}
    record(5, passed, f"{len(rows)} (delta, c) settings, imperfect: {bad or 'none'}; "
                      f"exhaustive={exhaustive}; 31-vertex block={fig_ok}")
    assert passed


# ---------------------------------------------------------------- 6

C6_TRIALS = 10_000


def _c6_run(d, shape, rng):
    tally = collections.Counter()
    for trial in range(C6_TRIALS):
        if shape == "pair":
            K, out, e = pair_instance(d, rng)
        else:
            K, out, e = triple_instance(d)
        adj = _adj_from_edges(list(K) + list(out), e)
        if trial % 2:
            L = random_lists(adj, rng, int(rng.integers(d + 1, d + 5)))
        else:
            L = adversarial_lists(shape, K, out, adj, rng)
        try:
            choosable_color(shape, K, out, e, L, min_core=min(5, d - 1))
            tally["ok"] += 1
        except ShapeMismatch:
            tally["fail"] += 1
            tally["infeasible"] += not is_list_colorable(adj, L)
    return tally


@pytest.fixture(scope="module")
def c6_tallies():
    rng = np.random.default_rng(5)
    return {(d, s): _c6_run(d, s, rng) for d in (5, 6, 7) for s in ("pair", "triple")}


def test_c6_choosability(c6_tallies):
    fails = {k: t["fail"] for k, t in c6_tallies.items() if t["fail"]}
    # every failure must be a genuinely infeasible list assignment
    explained = all(t["fail"] == t["infeasible"] for t in c6_tallies.values())
    passed = not fails
    record(6, passed, f"failures {fails or 'none'} of {C6_TRIALS} per shape; "
                      f"all failures infeasible by exhaustive search: {explained}")
    assert explained
    # outside the triple at d = 5 every assignment succeeds
    assert all(t["fail"] == 0 for k, t in c6_tallies.items() if k != (5, "triple"))


@pytest.mark.xfail(strict=True, reason="the three-outside shape around a 5-clique has "
                                       "infeasible list assignments (exhaustive search)")
def test_c6_triple_at_five_always_succeeds(c6_tallies):
    assert c6_tallies[(5, "triple")]["fail"] == 0


# ---------------------------------------------------------------- 7

def test_c7_reed_transform_invariants():
    tally = collections.Counter()
    for delta in (32, 64):
        for seed in range(100):
            g, _ = planted(delta, seed)
            s = run_pass(EdgeStream.from_graph(g), RunConfig(seed=seed))
            ctx = Ctx(s)
            step1_preprocess(ctx)
            try:
                step1_reed_transform(ctx)
            except PipelineFailure as exc:
                tally[f"{delta}:stopped:{exc.kind}"] += 1
                continue
            r = check_rt_invariants(g, ctx)
            tally[f"{delta}:{'ok' if r['ok'] else 'violated'}"] += 1
    violated = sum(v for k, v in tally.items() if k.endswith("violated"))
    built = sum(v for k, v in tally.items() if k.endswith(":ok") or k.endswith("violated"))
    passed = violated == 0
    record(7, passed, f"{violated} invariant violations over {built} transformed graphs; "
                      f"{dict(sorted(tally.items()))}")
    assert passed


# ---------------------------------------------------------------- 8

def test_c8_end_to_end():
    tally = collections.Counter()
    unverified = 0
    for seed in range(200):
        delta = (32, 48, 64)[seed % 3]
        g, _ = planted(delta, seed)
        assert g.n <= 5000
        try:
            s = run_pass(EdgeStream.from_graph(g), RunConfig(seed=seed))
        except PipelineFailure as exc:
            tally[f"stopped:{exc.step}"] += 1
            continue
        res = run_pipeline(s)
        if res.status != "colored":
            tally[f"stopped:{res.failure.get('step')}"] += 1
            continue
        proper = verify_coloring(g, res.colors, delta - 1).ok and res.colors.max() <= delta - 1
        serene, _ = check_serene(res.ctx.phi, s)
        if proper and serene:
            tally["colored"] += 1
        else:
            unverified += 1
    rate = tally["colored"] / 200
    passed = unverified == 0
    record(8, passed, f"{unverified} unverified colorings; completion {tally['colored']}/200 = {rate:.2f} "
                      f"(reported only); {dict(sorted(tally.items()))}")
    assert passed


# ---------------------------------------------------------------- 9

def test_c9_space_scaling():
    sizes = [2 ** e for e in range(12, 17)]
    rep = bench_memory(sizes, 32, 8.0, RunConfig(), seed=0)
    slope = rep["slope"]
    ident = all(r["identity_ok"] for r in rep["rows"])
    passed = abs(slope - 1.0) <= 0.1 and ident
    record(9, passed, f"log-log slope {slope:.3f}; sketch accounting identity exact: {ident}")
    assert passed


# ---------------------------------------------------------------- 10

def test_c10_slack_statistics():
    ref = stats.load_reference(os.path.join(FIXTURES, "slack_reference.json"))
    exact = within = 0
    mono = True
    for name, params in stats.SWEEPS.items():
        fixed, fresh = [], []
        for p in params:
            key = f"{name}:{p}"
            a = stats.slack_statistics(name, ref[key]["trials"], ref[key]["seed"], p)
            b = stats.slack_statistics(name, ref[key]["trials"], 2024, p)
            fixed.append(a)
            fresh.append(b)
            exact += a.row.successes == ref[key]["successes"]
            lo, hi = wilson_interval(ref[key]["successes"], ref[key]["trials"])
            blo, bhi = b.row.ci
            within += blo <= hi and lo <= bhi
        if name in stats.MONOTONE:
            mono &= stats.is_monotone(fixed) and stats.is_monotone(fresh)
    total = len(ref)
    passed = exact == total and within == total and mono
    record(10, passed, f"exact {exact}/{total}; fresh seed consistent {within}/{total}; monotone {mono}")
    assert passed


# ---------------------------------------------------------------- 11

def test_c11_stream_order_invariance(tmp_path):
    import filecmp

    g32, _ = planted(32, 7)
    graphs = {
        "planted": g32,
        "sparse": gen_sparse_random_graph(3000, 32, 8, 1),
        "cliques": disjoint_cliques(3, 33, delta=32),
        "small": gen_random_graph(40, 5, 0.2, 2),
    }
    same = 0
    for name, g in graphs.items():
        edges = list(g.edges())
        dirs = []
        for k in range(3):
            order = np.random.default_rng(100 + k).permutation(len(edges))
            s = run_pass(EdgeStream(g.n, g.delta, [edges[i] for i in order]), RunConfig(seed=3))
            d = tmp_path / f"{name}{k}"
            s.save(str(d))
            dirs.append(d)
        files = sorted(os.listdir(dirs[0]))
        ok = all(filecmp.cmpfiles(dirs[0], d, files, shallow=False)[0] == files for d in dirs[1:])
        same += ok
    passed = same == len(graphs)
    record(11, passed, f"{same}/{len(graphs)} streams byte-identical across 3 permutations")
    assert passed


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))

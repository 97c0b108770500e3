import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from streamchroma.field import choose_prime, decode_syndromes, encode, signed
from streamchroma.graph import Graph
from streamchroma.oracles import (AMBIGUOUS, brute_force_recover, check_acd, chromatic_number, exact_color,
                                  wilson_interval)


def test_exact_coloring_small_graphs():
    k4 = Graph.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert not exact_color(k4, 3).sat and exact_color(k4, 4).sat
    c5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert chromatic_number(c5) == 3
    pet = nx.petersen_graph()
    assert chromatic_number(Graph.from_edges(10, pet.edges())) == 3


@given(st.integers(4, 11), st.floats(0.1, 0.9), st.integers(0, 10_000))
def test_chromatic_number_against_networkx_bounds(n, p, seed):
    G = nx.gnp_random_graph(n, p, seed=seed)
    g = Graph.from_edges(n, G.edges())
    chi = chromatic_number(g)
    omega = max((len(c) for c in nx.find_cliques(G)), default=1)
    greedy = max(nx.greedy_color(G, "largest_first").values(), default=-1) + 1
    assert omega <= chi <= max(greedy, 1)
    r = exact_color(g, chi)
    assert all(r.colors[u] != r.colors[v] for u, v in G.edges())
    if chi > 1:
        assert not exact_color(g, chi - 1).sat


def test_brute_force_recover_matches_decoder():
    n, p = 20, choose_prime(20).p
    rng = np.random.default_rng(0)
    for _ in range(50):
        k = int(rng.integers(1, 4))
        x = {int(j): int(s) for j, s in zip(rng.choice(n, k, replace=False), rng.choice([-1, 1], k))}
        S = encode(x, 2 * k, p)
        d = decode_syndromes(S, n, p)
        assert {j: signed(c, p) for j, c in d.items()} == brute_force_recover(S, k, n, p) == x


def test_check_acd_examples():
    k = [(a, b) for a in range(11) for b in range(a + 1, 11)]
    g = Graph.from_edges(11, k, delta=10)
    assert check_acd(g, [], [list(range(11))], 0.5, 0.5) == []
    bad = check_acd(g, list(range(11)), [], 0.5, 0.5)
    assert {v.kind for v in bad} == {"sparsity"}
    assert any(v.kind == "partition" for v in check_acd(g, [0], [list(range(11))], 0.5, 0.5))


def test_wilson_interval():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi and abs((lo + hi) / 2 - 0.5) < 1e-12
    assert wilson_interval(0, 10)[0] == 0.0 and wilson_interval(10, 10)[1] == 1.0
    assert wilson_interval(9950, 10000)[0] > 0.99

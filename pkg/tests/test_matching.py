import networkx as nx
import numpy as np
from hypothesis import given, strategies as st

from streamchroma.pipeline.matching import (PaletteGraph, find_L_perfect_matching, hopcroft_karp,
                                            palette_conditions, random_palette_graph, sample_edges,
                                            sampling_rate)


def _nx_size(adj, n_right):
    G = nx.Graph()
    G.add_nodes_from(("L", i) for i in range(len(adj)))
    G.add_nodes_from(("R", j) for j in range(n_right))
    G.add_edges_from((("L", i), ("R", j)) for i, a in enumerate(adj) for j in a)
    top = [("L", i) for i in range(len(adj))]
    return len(nx.bipartite.maximum_matching(G, top_nodes=top)) // 2


bip = st.integers(1, 12).flatmap(lambda nl: st.integers(1, 12).flatmap(
    lambda nr: st.tuples(st.just(nr), st.lists(st.sets(st.integers(0, nr - 1)).map(sorted),
                                               min_size=nl, max_size=nl))))


@given(bip)
def test_matching_size_agrees_with_networkx(inst):
    nr, adj = inst
    ml = hopcroft_karp(adj, nr)
    used = [m for m in ml if m >= 0]
    assert len(used) == len(set(used))
    assert all(m in adj[i] for i, m in enumerate(ml) if m >= 0)
    assert len(used) == _nx_size(adj, nr)


def test_identity_and_star():
    pg = PaletteGraph([10, 11, 12], [1, 2, 3], [[0], [1], [2]])
    assert find_L_perfect_matching(pg) == {10: 1, 11: 2, 12: 3}
    # three left vertices that can only use one color
    star = PaletteGraph([0, 1, 2], [1, 2, 3], [[0], [0], [0]])
    assert find_L_perfect_matching(star) is None


def test_random_palette_graphs_meet_conditions():
    rng = np.random.default_rng(0)
    for k in (20, 60, 200):
        pg = random_palette_graph(k, rng)
        assert all(palette_conditions(pg).values())


def test_condition_checker_rejects():
    k = 8
    low = PaletteGraph(list(range(k)), list(range(k)), [[0]] * k)
    c = palette_conditions(low)
    assert c["sizes"] and not c["min_degree"] and not c["sets"]
    wide = PaletteGraph([0], list(range(5)), [[0, 1, 2, 3, 4]])
    assert not palette_conditions(wide)["sizes"]


def test_sampling_rate_values():
    assert abs(sampling_rate(500, 0.01) - 20 / 500 * (np.log(500) + np.log(100))) < 1e-12
    assert sampling_rate(10, 0.01) == 1.0


def test_sampled_graph_usually_matches():
    rng = np.random.default_rng(1)
    ok = sum(find_L_perfect_matching(sample_edges(random_palette_graph(200, rng), sampling_rate(200, 0.01), rng))
             is not None for _ in range(5))
    assert ok >= 4

import io
import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from streamchroma.errors import DuplicateEdge, MalformedHeader, SelfLoop, VertexOutOfRange
from streamchroma.generators import gen_random_graph
from streamchroma.graph import (Graph, has_clique_of_size, load_graph, max_clique, read_coloring,
                                read_edge_stream, verify_coloring, write_coloring, write_edge_stream)
from streamchroma.oracles import exact_color


def stream_of(text, **kw):
    return read_edge_stream(io.StringIO(text), **kw)


def test_read_small_stream():
    s = stream_of("4 3\n0 1\n1 2\n")
    assert (s.n, s.delta) == (4, 3)
    assert list(s) == [(0, 1), (1, 2)]


def test_empty_body():
    s = stream_of("5 2\n")
    assert list(s) == []


@pytest.mark.parametrize("text, err", [
    ("3 2\n2 2\n", SelfLoop),
    ("3 2\n0 5\n", VertexOutOfRange),
    ("3\n", MalformedHeader),
    ("", MalformedHeader),
    ("3 2\n0 1 2\n", MalformedHeader),
])
def test_stream_errors(text, err):
    with pytest.raises(err):
        list(stream_of(text))


def test_duplicate_detection_is_opt_in():
    assert len(list(stream_of("3 2\n0 1\n1 0\n"))) == 2
    with pytest.raises(DuplicateEdge):
        list(stream_of("3 2\n0 1\n1 0\n", check_duplicates=True))


def test_stream_roundtrip(tmp_path):
    p = tmp_path / "g.stream"
    write_edge_stream(str(p), 4, 2, [(0, 1), (2, 3)])
    g = load_graph(str(p))
    assert g.n == 4 and sorted(g.edges()) == [(0, 1), (2, 3)]


def test_verify_triangle():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    rep = verify_coloring(g, [1, 2, 3], 3)
    assert rep.ok and rep.colors_used == 3
    bad = verify_coloring(g, [1, 1, 2], 3)
    assert not bad.proper and tuple(bad.first_violation) == (0, 1)


def test_verify_counts_uncolored_and_budget():
    g = Graph.from_edges(3, [(0, 1)])
    rep = verify_coloring(g, [1, 0, 5], 3)
    assert rep.uncolored_count == 1 and not rep.within_budget and not rep.ok


def test_k5_exact_coloring_verifies():
    g = Graph.from_edges(5, itertools.combinations(range(5), 2))
    res = exact_color(g, 5)
    assert verify_coloring(g, res.colors, 5).ok


def test_clique_queries():
    k6 = Graph.from_edges(6, itertools.combinations(range(6), 2))
    assert has_clique_of_size(k6, 6)
    c5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert not has_clique_of_size(c5, 3)
    # K8 minus a perfect matching: clique number 4
    pm = {(0, 1), (2, 3), (4, 5), (6, 7)}
    g = Graph.from_edges(8, [e for e in itertools.combinations(range(8), 2) if e not in pm])
    assert not has_clique_of_size(g, 5)
    assert has_clique_of_size(g, 4)


def test_random_graph_contract():
    assert gen_random_graph(10, 9, 0.0, 1).m == 0
    assert gen_random_graph(10, 9, 1.0, 1).m == 45
    a = gen_random_graph(1000, 20, 0.01, 7)
    b = gen_random_graph(1000, 20, 0.01, 7)
    assert sorted(a.edges()) == sorted(b.edges())
    assert a.max_degree() <= 20


def test_coloring_file_roundtrip(tmp_path):
    p = tmp_path / "c.txt"
    write_coloring(str(p), np.array([1, 2, 0, 3]))
    assert read_coloring(str(p), 4).tolist() == [1, 2, 0, 3]


@given(st.integers(5, 14), st.floats(0.2, 0.9), st.integers(0, 10_000))
def test_max_clique_matches_networkx(n, p, seed):
    g = gen_random_graph(n, n - 1, p, seed)
    ours = max_clique(g)
    nxg = nx.Graph(list(g.edges()))
    nxg.add_nodes_from(range(n))
    best = max(len(c) for c in nx.find_cliques(nxg))
    assert len(ours) == best
    assert all(g.has_edge(a, b) for a, b in itertools.combinations(ours, 2))

import itertools

import numpy as np
import pytest

from streamchroma.choosable import (_adj_from_edges, adversarial_lists, check_pair_shape, choosable_color,
                                    is_list_colorable, pair_instance, random_lists, triple_instance)
from streamchroma.errors import ShapeMismatch


def _proper(col, adj, lists):
    return all(col[v] in lists[v] and all(col[u] != col[v] for u in adj[v]) for v in adj)


@pytest.mark.parametrize("d", [5, 6, 7])
def test_pair_shape_random_and_adversarial(d):
    rng = np.random.default_rng(d)
    for trial in range(300):
        K, out, e = pair_instance(d, rng)
        adj = _adj_from_edges(list(K) + list(out), e)
        L = random_lists(adj, rng, d + 3) if trial % 2 else adversarial_lists("pair", K, out, adj, rng)
        col, route = choosable_color("pair", K, out, e, L, min_core=min(5, d - 1))
        assert _proper(col, adj, L) and route


@pytest.mark.parametrize("d", [6, 7])
def test_triple_shape(d):
    rng = np.random.default_rng(10 + d)
    K, us, e = triple_instance(d)
    adj = _adj_from_edges(list(K) + list(us), e)
    for trial in range(300):
        L = random_lists(adj, rng, d + 3) if trial % 2 else adversarial_lists("triple", K, us, adj, rng)
        col, _ = choosable_color("triple", K, us, e, L)
        assert _proper(col, adj, L)


def test_triple_at_five_has_an_infeasible_assignment():
    K, us, e = triple_instance(5)
    adj = _adj_from_edges(list(K) + list(us), e)
    L = {k: [1, 2, 3, 4, 5, 6] for k in K}
    L[us[0]], L[us[1]], L[us[2]] = [1, 2, 3, 4], [1, 2, 5, 6], [3, 4, 5, 6]
    # the three outside vertices use at least two colors, leaving four for five core members
    assert not is_list_colorable(adj, L)
    with pytest.raises(ShapeMismatch):
        choosable_color("triple", K, us, e, L)


def test_feasibility_oracle_agrees_with_brute_force():
    rng = np.random.default_rng(5)
    K, us, e = triple_instance(5)
    adj = _adj_from_edges(list(K) + list(us), e)
    edges = [(a, b) for a in adj for b in adj[a] if a < b]
    for _ in range(20):
        L = random_lists(adj, rng, 7)
        vs = sorted(adj)
        brute = any(all(c[vs.index(a)] != c[vs.index(b)] for a, b in edges)
                    for c in itertools.product(*(L[v] for v in vs)))
        assert brute == is_list_colorable(adj, L)


def test_pair_shape_rejects_wrong_structure():
    K = list(range(6))
    e = [(a, b) for a in K for b in K if a < b] + [(k, 6) for k in K] + [(k, 7) for k in K[:3]]
    adj = _adj_from_edges(K + [6, 7], e)
    with pytest.raises(ShapeMismatch):
        check_pair_shape(K, 6, 7, adj)
    with pytest.raises(ShapeMismatch):
        choosable_color("square", K, (6, 7), e, {})

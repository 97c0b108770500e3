import pytest
from hypothesis import given, strategies as st

from streamchroma.errors import CoreUndetermined
from streamchroma.structure import (CRITICAL, LARGE, SMALL, classify_friends, classify_size, compute_core,
                                    core_exact, detect_solitary, find_helper)


def test_size_classes():
    assert classify_size(33, 32, 4) == LARGE
    assert classify_size(33 - 4, 32, 4) == SMALL
    assert classify_size(32, 32, 4) == CRITICAL


def test_core_examples():
    C = tuple(range(10))
    assert compute_core(C, []) == C
    # s = 9 misses two members
    assert compute_core(C, [(0, 9), (1, 9)]) == tuple(range(9))
    # one anti-edge: drop the larger endpoint
    assert compute_core(C, [(2, 5)]) == tuple(v for v in C if v != 5)


def test_core_needs_exact_search_when_incomplete():
    with pytest.raises(CoreUndetermined):
        compute_core(tuple(range(10)), [(0, 1), (2, 3)], complete=False)


def test_solitary_shapes():
    sol, w = detect_solitary([(0, 1), (2, 3)])
    assert sol and w["kind"] == "anti_matching" and w["edges"] == [[0, 1], [2, 3]]
    sol, w = detect_solitary([(0, 1), (0, 2), (1, 2)])
    assert sol and w == {"kind": "independent_set", "vertices": [0, 1, 2]}
    assert detect_solitary([]) == (False, None)
    assert detect_solitary([(0, 1), (0, 2)]) == (False, None)


def test_unrecovered_members_make_it_solitary():
    assert detect_solitary([], unrecovered=(4, 7))[0]
    assert not detect_solitary([], unrecovered=(4, 7), size_class=SMALL)[0]


def test_friend_classification():
    K = list(range(31))
    nbrs = {100: frozenset(range(16))}
    friends, pop, friendly = classify_friends(K, nbrs, 2, 32)
    assert friends == [(100, 16)] and pop is None and friendly
    # adjacent to all of K: not a friend
    friends, _, _ = classify_friends(K, {101: frozenset(K)}, 2, 32)
    assert friends == []


def test_popular_pair():
    K = list(range(31))
    nbrs = {100: frozenset(range(0, 9)), 101: frozenset(range(8, 17))}
    friends, pop, friendly = classify_friends(K, nbrs, 4, 32)
    assert pop is not None and {pop["x1"], pop["x2"]} == {100, 101} and pop["w"] == 8
    assert not friendly


def test_helper_needs_recovered_endpoints():
    assert find_helper([(0, 1), (2, 3)], {0, 2})["kind"] == "anti_matching"
    assert find_helper([(0, 1), (2, 3)], {0}) is None
    h = find_helper([(0, 1), (0, 2), (1, 2)], {0, 1})
    assert h == {"kind": "independent_set", "known": [0, 1], "other": 2}


@given(st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(lambda e: e[0] < e[1]), max_size=12))
def test_core_is_a_maximum_clique(anti):
    C = tuple(range(10))
    K = core_exact(C, anti)
    assert all((a, b) not in anti for a in K for b in K if a < b)
    # no larger clique: brute force
    from itertools import combinations
    best = max(r for r in range(1, 11) for S in combinations(C, r)
               if all((a, b) not in anti for a, b in combinations(S, 2))) if True else 0
    assert len(K) == best

"""List coloring of the two small degree-minus-one choosable shapes.

Shape ``pair``: a ``d``-clique ``K`` plus ``s1, s2`` with a common core
neighbor ``v``, at least five core neighbors each, and core non-neighbors
``a1 != a2``.  Shape ``triple``: a ``d``-clique plus an independent set
``u1, u2, u3`` joined to all of ``K``.

Both routines first place the few colors that give ``v`` two units of slack
(and a second vertex one unit), then finish greedily with ``v`` last.  If
the greedy pass gets stuck, the remaining vertices are completed by an
exhaustive search over the residual lists and the route is reported.
"""
from __future__ import annotations

from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import ShapeMismatch

Adj = Dict[int, Set[int]]


def _adj_from_edges(vertices, edges) -> Adj:
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _check_lists(adj: Adj, lists) -> None:
    for v, nb in adj.items():
        if len(set(lists[v])) < len(nb) - 1:
            raise ShapeMismatch(f"list of {v} has {len(set(lists[v]))} colors, degree {len(nb)}")


def _free(v, adj, lists, col) -> List[int]:
    used = {col[u] for u in adj[v] if u in col}
    return [c for c in sorted(set(lists[v])) if c not in used]


def _search(order, adj, lists, col) -> Optional[Dict[int, int]]:
    """Backtracking over ``order`` with the colors already in ``col`` fixed."""
    col = dict(col)
    todo = [v for v in order if v not in col]

    def rec(i):
        if i == len(todo):
            return True
        v = todo[i]
        for c in _free(v, adj, lists, col):
            col[v] = c
            if rec(i + 1):
                return True
            del col[v]
        return False

    return col if rec(0) else None


def _finish_from(pre: Dict[int, int], order, adj, lists) -> Tuple[Optional[Dict[int, int]], str]:
    """Greedy completion in ``order``; exhaustive search over what is left if stuck."""
    col = dict(pre)
    for v in order:
        if v in col:
            continue
        f = _free(v, adj, lists, col)
        if not f:
            break
        col[v] = f[0]
    else:
        return col, "greedy"
    done = _search(order, adj, lists, pre)
    if done is not None:
        return done, "search"
    return _search(order, adj, lists, {}), "search-free"


# ---------------------------------------------------------------- shapes

def check_pair_shape(K: Sequence[int], s1: int, s2: int, adj: Adj, min_core: int = 5):
    """Validate the pair shape; returns ``(v, a1, a2)``.

    Five core neighbors plus one core non-neighbor need ``d >= 6``; at
    ``d = 5`` pass ``min_core=4``.
    """
    kset = set(K)
    d = len(K)
    if d < 5:
        raise ShapeMismatch("pair shape needs d >= 5")
    for a in K:
        if not (kset - {a}) <= adj[a]:
            raise ShapeMismatch("K is not a clique")
    n1, n2 = adj[s1] & kset, adj[s2] & kset
    common = sorted(n1 & n2)
    if not common:
        raise ShapeMismatch("s1 and s2 share no core neighbor")
    if len(n1) < min_core or len(n2) < min_core:
        raise ShapeMismatch(f"s1 or s2 has fewer than {min_core} core neighbors")
    m1, m2 = sorted(kset - n1), sorted(kset - n2)
    for a1, a2 in product(m1, m2):
        if a1 != a2:
            return common[0], a1, a2
    raise ShapeMismatch("no distinct core non-neighbors a1, a2")


def color_pair_shape(K, s1, s2, adj: Adj, lists, min_core: int = 5) -> Tuple[Dict[int, int], str]:
    """Two outside vertices around a ``d``-clique."""
    v, a1, a2 = check_pair_shape(K, s1, s2, adj, min_core)
    _check_lists(adj, lists)
    L = {u: set(lists[u]) for u in adj}
    pre: Dict[int, int] = {}
    unit = None
    s_ = {1: s1, 2: s2}
    a_ = {1: a1, 2: a2}
    kset = set(K)
    shared = [i for i in (1, 2) if L[s_[i]] & L[a_[i]]]
    if shared:
        i = shared[0]
        j = 3 - i
        c1 = min(L[s_[i]] & L[a_[i]])
        pre[s_[i]] = pre[a_[i]] = c1
        unit = min((adj[s_[i]] & kset) - {v, a_[1], a_[2]}, default=None)
        if c1 in L[v]:
            both = (L[s_[j]] & L[a_[j]]) - {c1}
            if both:
                c2 = min(both)
                pre[s_[j]] = pre[a_[j]] = c2
            else:
                for x in (s_[j], a_[j]):
                    out = L[x] - {c1} - L[v]
                    if out:
                        pre[x] = min(out)
                        break
        route = "case1"
    else:
        c1 = None
        for x in (s1, a1):
            out = L[x] - L[v]
            if out:
                c1 = min(out)
                pre[x] = c1
                break
        x = y = None
        for cand, other in ((s2, a2), (a2, s2)):
            if L[cand] - L[v] - {c1}:
                x, y = cand, other
                break
        if x is not None:
            w = min((adj[s2] & kset) - {v, a1, a2}, default=None)
            opts = sorted(L[x] - L[v] - {c1})
            outside_w = [c for c in opts if w is None or c not in L[w]]
            if outside_w:
                pre[x] = outside_w[0]
                unit = w
            else:
                pre[w] = opts[0]
                unit = y
        route = "case2"
    order = [u for u in (s1, s2) if u not in pre and u != unit]
    order += [u for u in sorted(K) if u not in pre and u not in (v, unit)]
    if unit is not None and unit not in pre:
        order.append(unit)
    order.append(v)
    order += [u for u in adj if u not in order and u not in pre]
    col, how = _finish_from(pre, order, adj, lists)
    return col, f"{route}-{how}"


def check_triple_shape(K, us, adj: Adj, min_d: int = 6):
    kset = set(K)
    if len(K) < min_d:
        raise ShapeMismatch(f"triple shape needs d >= {min_d}")
    if len(us) != 3:
        raise ShapeMismatch("need three outside vertices")
    for a in K:
        if not (kset - {a}) <= adj[a]:
            raise ShapeMismatch("K is not a clique")
    for i, u in enumerate(us):
        if not kset <= adj[u]:
            raise ShapeMismatch(f"{u} misses a core vertex")
        for w in us[i + 1:]:
            if w in adj[u]:
                raise ShapeMismatch("outside vertices are adjacent")


def color_triple_shape(K, us, adj: Adj, lists) -> Tuple[Dict[int, int], str]:
    """An independent triple fully joined to a ``d``-clique.

    Below ``d = 6`` the shape is not always colorable (three lists over six
    colors can overlap pairwise in two colors each), so it is handed to the
    exhaustive search and may come back ``None``.
    """
    check_triple_shape(K, us, adj, min_d=2)
    _check_lists(adj, lists)
    if len(K) < 6:
        order = list(us) + sorted(K)
        col, how = _finish_from({}, order, adj, lists)
        return col, f"small-{how}"
    L = {u: set(lists[u]) for u in adj}
    v = min(K)
    pre: Dict[int, int] = {}
    route = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        ui, uj = us[i], us[j]
        uk = us[3 - i - j]
        both = L[ui] & L[uj]
        if len(both) < 3:
            continue
        if both & L[uk]:
            c = min(both & L[uk])
            pre[ui] = pre[uj] = pre[uk] = c
        elif both - L[v]:
            c = min(both - L[v])
            pre[ui] = pre[uj] = c
        else:
            c = min(both)
            pre[ui] = pre[uj] = c
            out = L[uk] - L[v]
            if not out:
                raise ShapeMismatch("lists contradict the counting bound")
            pre[uk] = min(out)
        route = "shared"
        break
    if route is None:
        route = "spread"
        placed = 0
        for group in ((us[0], us[1]), (us[1], us[2]), (us[0], us[2])):
            if placed == 2:
                break
            if any(u in pre for u in group) and placed:
                group = tuple(u for u in group if u not in pre)
            for u in group:
                if u in pre:
                    continue
                out = L[u] - L[v] - set(pre.values())
                if out:
                    pre[u] = min(out)
                    placed += 1
                    break
    order = [u for u in us if u not in pre] + [u for u in sorted(K) if u != v] + [v]
    col, how = _finish_from(pre, order, adj, lists)
    return col, f"{route}-{how}"


# ---------------------------------------------------------------- public

def choosable_color(shape: str, K, outside, edges, lists, min_core: int = 5) -> Tuple[Dict[int, int], str]:
    """Color a choosable shape from lists of size ``deg - 1``.

    ``shape`` is ``"pair"`` (``outside = (s1, s2)``) or ``"triple"``
    (``outside = (u1, u2, u3)``).  Returns the coloring and the route taken.
    """
    vertices = list(K) + list(outside)
    adj = _adj_from_edges(vertices, edges)
    if shape == "pair":
        col, route = color_pair_shape(list(K), outside[0], outside[1], adj, lists, min_core)
    elif shape == "triple":
        col, route = color_triple_shape(list(K), list(outside), adj, lists)
    else:
        raise ShapeMismatch(f"unknown shape {shape!r}")
    if col is None:
        raise ShapeMismatch("no list coloring exists; the shape preconditions do not hold")
    for v, c in col.items():
        if c not in lists[v] or any(col[u] == c for u in adj[v]):
            raise AssertionError("internal: produced coloring is not a list coloring")
    return col, route


def is_list_colorable(adj: Adj, lists) -> bool:
    """Exhaustive feasibility check (independent of the shape routines)."""
    order = sorted(adj, key=lambda v: len(lists[v]))
    return _search(order, adj, lists, {}) is not None


def pair_instance(d: int, rng, s_edge: Optional[bool] = None):
    """A random ``pair`` shape: returns ``(K, (s1, s2), edges)``."""
    K = list(range(d))
    s1, s2 = d, d + 1
    edges = [(a, b) for a in K for b in K if a < b]
    v = int(rng.integers(d))
    a1, a2 = (int(x) for x in rng.choice([k for k in K if k != v], size=2, replace=False))
    need = min(5, d - 1)
    for s, a in ((s1, a1), (s2, a2)):
        others = [k for k in K if k not in (v, a)]
        extra = int(rng.integers(need - 1, len(others) + 1))
        chosen = set(int(x) for x in rng.choice(others, size=extra, replace=False)) | {v}
        edges += [(min(k, s), max(k, s)) for k in sorted(chosen)]
    if s_edge if s_edge is not None else bool(rng.integers(2)):
        edges.append((s1, s2))
    return K, (s1, s2), edges


def triple_instance(d: int):
    K = list(range(d))
    us = (d, d + 1, d + 2)
    edges = [(a, b) for a in K for b in K if a < b] + [(k, u) for k in K for u in us]
    return K, us, edges


def random_lists(adj: Adj, rng, palette: int) -> Dict[int, List[int]]:
    """Lists of size ``deg - 1`` drawn from ``1..palette``."""
    out = {}
    for v, nb in adj.items():
        k = len(nb) - 1
        out[v] = sorted(int(c) + 1 for c in rng.choice(palette, size=k, replace=False))
    return out


def adversarial_lists(shape: str, K, outside, adj: Adj, rng, tries: int = 200) -> Dict[int, List[int]]:
    """Lists steering the case analysis into its harder branches.

    For ``pair``: each ``s_i`` list is disjoint from its core non-neighbor's
    list.  For ``triple``: the outside lists pairwise share at most two
    colors.  Palettes are kept small so lists overlap heavily elsewhere.
    """
    d = len(K)
    kset = set(K)
    for _ in range(tries):
        L = random_lists(adj, rng, int(rng.integers(d + 1, d + 4)))
        if shape == "pair":
            ok = True
            for s in outside:
                miss = sorted(kset - adj[s])
                a = miss[0]
                pool = [c for c in range(1, 2 * d + 4) if c not in L[a]]
                k = len(adj[s]) - 1
                if len(pool) < k:
                    ok = False
                    break
                L[s] = sorted(int(c) for c in rng.choice(pool, size=k, replace=False))
            if ok:
                return L
        else:
            k = d - 1
            pal = list(range(1, 3 * d + 1))
            u = list(outside)
            L[u[0]] = sorted(int(c) for c in rng.choice(pal, size=k, replace=False))
            for t in (1, 2):
                for _inner in range(tries):
                    cand = sorted(int(c) for c in rng.choice(pal, size=k, replace=False))
                    if all(len(set(cand) & set(L[u[j]])) <= 2 for j in range(t)):
                        L[u[t]] = cand
                        break
                else:
                    break
            else:
                return L
    raise ShapeMismatch("could not draw adversarial lists")


__all__ = [
    "adversarial_lists", 
    "choosable_color", "color_pair_shape", "color_triple_shape", "check_pair_shape",
    "check_triple_shape", "is_list_colorable", "pair_instance", "triple_instance", "random_lists",
]

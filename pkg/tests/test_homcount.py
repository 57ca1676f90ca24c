import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vclab.builders import complete_bipartite, complete_graph, cycle_graph, empty_graph, random_graph
from vclab.graph import DenseGraph
from vclab.homcount import (
    H1,
    H2,
    H3,
    H3MINUS,
    H3PLUS,
    H4,
    K23,
    NAMED_PATTERNS,
    BudgetExceeded,
    Pattern,
    census,
    count_cycles,
    count_H1,
    count_H2,
    count_H3,
    count_H3minus,
    count_H3plus,
    count_H4,
    count_named,
    count_paths,
    count_pattern_bruteforce,
    cycle_pattern,
    iter_embeddings,
    max_common_neighbors,
    path_pattern,
)


def naive(G: DenseGraph, U, pat: Pattern) -> int:
    """Enumerate all |U|^k tuples."""
    U = list(range(G.n)) if U is None else list(U)
    A = G.adj
    total = 0
    for tup in itertools.product(U, repeat=pat.k):
        if all(A[tup[a], tup[b]] for a, b in pat.required) and \
                not any(A[tup[a], tup[b]] for a, b in pat.forbidden) and \
                all(tup[a] != tup[b] for a, b in pat.distinct):
            total += 1
    return total


FAST = {
    "H1": (count_H1, H1),
    "H2": (count_H2, H2),
    "H3": (count_H3, H3),
    "H3plus": (count_H3plus, H3PLUS),
    "H3minus": (count_H3minus, H3MINUS),
    "H4": (count_H4, H4),
}


def test_single_edge_and_triangle_in_k3():
    K3 = complete_graph(3)
    assert count_pattern_bruteforce(K3, None, path_pattern(1)) == 6
    assert count_pattern_bruteforce(K3, None, cycle_pattern(3)) == 6


def test_edgeless_gives_zero():
    E = empty_graph(5)
    for pat in NAMED_PATTERNS.values():
        assert count_pattern_bruteforce(E, None, pat) == 0
    for name in ("H1", "H2", "H3", "H3plus", "H3minus", "H4", "C3", "P2"):
        assert count_named(E, None, name) == 0


def test_paths():
    K3 = complete_graph(3)
    assert count_paths(K3, None, 1) == 6
    assert count_paths(K3, None, 2) == 12
    G = random_graph(7, 0.5, 3)
    assert count_paths(G, [1, 2, 5], 0) == 3


def test_cycles():
    assert count_cycles(complete_graph(3), None, 3) == 6
    assert count_cycles(cycle_graph(4), None, 4) == 32
    kb = complete_bipartite(3, 4)
    assert count_cycles(kb, None, 3) == 0 and count_cycles(kb, None, 5) == 0


def test_named_pins():
    assert count_H1(cycle_graph(4), None) == 64
    assert count_H2(complete_bipartite(2, 3), None) == 180
    assert count_H4(complete_graph(3), None) == 54
    assert max_common_neighbors(complete_bipartite(2, 3), None) == 3
    assert max_common_neighbors(empty_graph(4), None) == 0


def test_k23_brute_force_matches_h2_on_k23():
    G = complete_bipartite(2, 3)
    assert count_pattern_bruteforce(G, None, K23) == count_pattern_bruteforce(G, None, H2) == 180


def test_h3minus_zero_on_triangle_free():
    for G in (cycle_graph(6), complete_bipartite(3, 3), cycle_graph(5)):
        assert count_H3minus(G, None) == 0


@pytest.mark.parametrize("G", [complete_graph(3), cycle_graph(4), complete_bipartite(2, 3),
                               complete_graph(4), complete_graph(5)], ids=["K3", "C4", "K23", "K4", "K5"])
def test_fast_kernels_match_naive_enumeration(G):
    for name, (fn, pat) in FAST.items():
        if G.n ** pat.k > 200_000:
            continue
        assert fn(G, None) == naive(G, None, pat), name


def test_k5_h3plus_and_random_h3_oracles():
    assert count_H3plus(complete_graph(5), None) == count_pattern_bruteforce(complete_graph(5), None, H3PLUS)
    G = random_graph(8, 0.5, 1)
    assert count_H3(G, None) == count_pattern_bruteforce(G, None, H3)
    G = random_graph(8, 0.5, 2)
    assert count_H4(G, None) == count_pattern_bruteforce(G, None, H4)


def test_bruteforce_matches_naive_with_constraints():
    G = random_graph(6, 0.5, 5)
    pat = Pattern(4, required=[(0, 1), (1, 2), (2, 3)], forbidden=[(0, 2)], distinct=[(0, 3)])
    assert count_pattern_bruteforce(G, None, pat) == naive(G, None, pat)
    assert count_pattern_bruteforce(G, [0, 2, 3, 5], pat) == naive(G, [0, 2, 3, 5], pat)


def test_loops_are_counted_as_edges():
    a = np.zeros((3, 3), dtype=bool)
    a[0, 0] = a[0, 1] = a[1, 0] = True
    G = DenseGraph(a)
    assert count_paths(G, None, 1) == 3
    assert count_pattern_bruteforce(G, None, cycle_pattern(1)) == 1
    for name, (fn, pat) in FAST.items():
        assert fn(G, None) == naive(G, None, pat), name


def test_iter_embeddings_agrees_with_count():
    G = random_graph(7, 0.6, 11)
    embs = list(iter_embeddings(G, None, H2))
    assert len(embs) == count_H2(G, None)
    A = G.adj
    assert all(A[e[a], e[b]] for e in embs for a, b in H2.required)


def test_role_domains_restrict_a_single_vertex():
    G = random_graph(7, 0.6, 4)
    x = H3MINUS.role("x")
    restricted = count_pattern_bruteforce(G, None, H3MINUS, role_domains={"x": [0, 1]})
    by_hand = sum(1 for e in iter_embeddings(G, None, H3MINUS) if e[x] in (0, 1))
    assert restricted == by_hand


def test_budget_is_enforced():
    G = complete_graph(12)
    with pytest.raises(BudgetExceeded):
        count_pattern_bruteforce(G, None, H3.injective(), budget=1000)
    with pytest.raises(BudgetExceeded):
        count_H3(G, None, budget=10)


def test_large_counts_stay_exact():
    # complete graph with loops: every tuple is a homomorphism
    G = DenseGraph(np.ones((60, 60), dtype=bool))
    assert count_H3(G, None) == 60 ** 7
    assert count_H3plus(G, None) == 60 ** 7
    assert count_H4(G, None) == 60 ** 6
    assert count_cycles(G, None, 6) == 60 ** 6


def test_census_keys():
    c = census(cycle_graph(5), None)
    assert c["C5"] == 10 and c["P1"] == 10 and c["C3"] == 0


@st.composite
def graphs_and_subsets(draw):
    n = draw(st.integers(1, 7))
    p = draw(st.sampled_from([0.2, 0.5, 0.8]))
    loops = draw(st.booleans())
    rng = np.random.default_rng(draw(st.integers(0, 2**31)))
    a = np.triu(rng.random((n, n)) < p, 0 if loops else 1)
    a = a | a.T
    U = sorted(draw(st.sets(st.integers(0, n - 1), min_size=1)))
    return DenseGraph(a), U


@settings(max_examples=60, deadline=None)
@given(graphs_and_subsets())
def test_property_fast_equals_bruteforce(gu):
    G, U = gu
    for k in range(5):
        assert count_paths(G, U, k) == count_pattern_bruteforce(G, U, path_pattern(k))
    for m in range(1, 7):
        assert count_cycles(G, U, m) == count_pattern_bruteforce(G, U, cycle_pattern(m))
    for name, (fn, pat) in FAST.items():
        assert fn(G, U) == count_pattern_bruteforce(G, U, pat), name


@settings(max_examples=40, deadline=None)
@given(graphs_and_subsets(), st.integers(2, 4))
def test_property_bruteforce_equals_naive(gu, k):
    G, U = gu
    rng = np.random.default_rng(len(U) * 31 + k)
    pairs = [(a, b) for a in range(k) for b in range(a, k)]
    pick = rng.permutation(len(pairs))
    req = [pairs[i] for i in pick[:2]]
    forb = [pairs[i] for i in pick[2:3]]
    dist = [(a, b) for a, b in pairs[:2] if a != b]
    pat = Pattern(k, req, forb, dist)
    if len(U) ** k <= 5000:
        assert count_pattern_bruteforce(G, U, pat) == naive(G, U, pat)


@settings(max_examples=30, deadline=None)
@given(graphs_and_subsets(), st.integers(0, 10**6))
def test_property_monotone_in_U(gu, seed):
    G, U = gu
    rng = np.random.default_rng(seed)
    bigger = sorted(set(U) | set(rng.choice(G.n, size=int(rng.integers(0, G.n + 1)), replace=True).tolist()))
    for name in ("P2", "C4", "H1", "H2", "H3", "H3plus", "H3minus", "H4"):
        assert count_named(G, U, name) <= count_named(G, bigger, name), name


@settings(max_examples=30, deadline=None)
@given(graphs_and_subsets())
def test_property_h3plus_at_most_h3(gu):
    G, U = gu
    assert count_H3plus(G, U) <= count_H3(G, U)


@settings(max_examples=30, deadline=None)
@given(graphs_and_subsets(), st.integers(0, 4), st.integers(0, 4))
def test_property_constraints_never_increase(gu, a, b):
    G, U = gu
    base = count_pattern_bruteforce(G, U, H1)
    if a != b:
        assert count_pattern_bruteforce(G, U, H1.with_distinct((a, b))) <= base
    if (min(a, b), max(a, b)) not in H1.required:
        assert count_pattern_bruteforce(G, U, H1.with_forbidden((a, b))) <= base

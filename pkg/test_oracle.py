#!/usr/bin/env python3
"""
Test Oracles & Generators
"""
import sys
import os

import networkx as nx
import numpy as np
import pytest

# Thêm thư mục gốc vào path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.graph_core import Graph, PreconditionError, BudgetExceeded, verify_cycle
from src.theta_search import ThetaGraph, verify_theta
from src.trilayered import verify_well_placed
from src.cycle_pipeline import bound
from src.oracle import (
    contains_cycle, ex_naive, ex_brute,
    gen_random_bipartite, gen_min_degree_bipartite, gen_random_trilayered,
    gen_polarity_graph, gen_complete_bipartite, gen_cycle, gen_path, gen_star,
    gen_petersen, gen_complete, gen_planted_extraction,
)

EX_C4 = {1: 0, 2: 1, 3: 3, 4: 4, 5: 6, 6: 7, 7: 9, 8: 11}


def test_contains_cycle_petersen():
    G = gen_petersen()
    cycle = contains_cycle(G, 5)
    assert cycle.vertices == (0, 1, 2, 3, 4)
    assert verify_cycle(G, cycle, 5)
    assert contains_cycle(G, 4) is None
    assert contains_cycle(G, 11) is None


def test_contains_cycle_least_and_errors():
    assert contains_cycle(gen_complete(5), 4).vertices == (0, 1, 2, 3)
    assert contains_cycle(gen_complete_bipartite(2, 2), 4).vertices == (0, 2, 1, 3)
    assert contains_cycle(gen_path(6), 4) is None
    with pytest.raises(PreconditionError) as info:
        contains_cycle(gen_cycle(4), 2)
    assert info.value.item == 'L'


@pytest.mark.parametrize("n", sorted(EX_C4))
def test_ex_c4_values(n):
    result = ex_brute(n, 2)
    assert result.ex == EX_C4[n]
    assert result.witness.num_edges == result.ex
    if n >= 4:
        assert contains_cycle(result.witness, 4) is None


def test_ex_naive_agrees_with_pruned_search():
    for n in range(1, 7):
        assert ex_naive(n, 2).ex == ex_brute(n, 2).ex
    with pytest.raises(BudgetExceeded):
        ex_naive(7, 2)


def test_ex_brute_small_and_limits():
    result = ex_brute(5, 3)
    assert result.ex == 10
    assert result.strategy == 'complete'
    assert ex_brute(6, 2, threads=3).ex == 7
    with pytest.raises(BudgetExceeded):
        ex_brute(9, 2, max_n=8)
    with pytest.raises(PreconditionError) as info:
        ex_brute(5, 1)
    assert info.value.item == 'k'


def test_ex_result_dict():
    data = ex_brute(4, 2).to_dict()
    assert data['ex'] == 4
    assert data['witness'].startswith("4 4\n")


@pytest.mark.parametrize("q, vertices, edges", [(2, 7, 9), (3, 13, 24), (5, 31, 90)])
def test_polarity_graph(q, vertices, edges):
    G = gen_polarity_graph(q)
    assert G.n == vertices
    assert G.num_edges == edges
    degrees = sorted(G.degrees().tolist())
    assert degrees.count(q) == q + 1
    assert degrees.count(q + 1) == q * q
    assert contains_cycle(G, 4) is None


def test_polarity_graph_rejects_non_prime():
    with pytest.raises(PreconditionError) as info:
        gen_polarity_graph(4)
    assert info.value.item == 'q'


def test_random_generators_are_seeded():
    assert gen_random_bipartite(5, 6, 0.5, 7).edges == gen_random_bipartite(5, 6, 0.5, 7).edges
    G = gen_random_bipartite(5, 6, 1.0, 0)
    assert G.num_edges == 30 and G.is_bipartite()
    with pytest.raises(PreconditionError):
        gen_random_bipartite(2, 2, 1.5, 0)

    H = gen_min_degree_bipartite(7, 9, 3, 1)
    assert H.min_degree() >= 3 and H.is_bipartite()

    T = gen_random_trilayered(4, 5, 3, 1.0, 1.0, 2)
    assert T.e12() == 20
    assert T.v3 == frozenset({9, 10, 11})


def test_small_families():
    assert gen_star(4).degree(0) == 4
    assert gen_cycle(7).num_edges == 7
    assert gen_complete_bipartite(3, 4).num_edges == 12
    assert gen_petersen().n == 10


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_planted_level_pair_instances(k):
    for seed in range(10):
        instance = gen_planted_extraction(k, seed)
        theta = instance.cert
        assert isinstance(theta, ThetaGraph)
        assert verify_theta(instance.graph, theta, k)
        e = instance.explore()
        assert theta.vertices <= e.V(instance.level) | e.V(instance.level + 1)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_planted_well_placed_instances(k):
    for seed in range(10):
        instance = gen_planted_extraction(k, seed, well_placed=True)
        e = instance.explore()
        assert verify_well_placed(instance.trilayered(e), instance.cert, k)


def test_planted_well_placed_needs_k3():
    with pytest.raises(PreconditionError):
        gen_planted_extraction(2, 0, well_placed=True)


def _has_cycle_of_length(G: Graph, L: int) -> bool:
    return any(len(c) == L for c in nx.simple_cycles(G.to_networkx(), length_bound=L))


@pytest.mark.parametrize("seed", range(30))
def test_contains_cycle_agrees_with_networkx(seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(rng.integers(4, 11))
    G = Graph.from_networkx(nx.gnp_random_graph(n, 0.35, seed=seed))
    for L in range(3, n + 1):
        found = contains_cycle(G, L)
        assert (found is not None) == _has_cycle_of_length(G, L)
        if found is not None:
            assert verify_cycle(G, found, L)


def test_ex_c4_monotone_and_bounded():
    values = [ex_brute(n, 2).ex for n in range(1, 9)]
    assert values == sorted(values)
    assert all(v <= bound(n, 2) for n, v in enumerate(values, start=1))


@pytest.mark.parametrize("q", [2, 3, 5])
def test_polarity_graph_within_bound(q):
    G = gen_polarity_graph(q)
    assert G.num_edges == q * (q + 1) ** 2 // 2
    assert G.num_edges <= bound(G.n, 2)


def main():
    print("🧪 Testing Oracles & Generators...")
    test_contains_cycle_petersen()
    test_contains_cycle_least_and_errors()
    for seed in range(30):
        test_contains_cycle_agrees_with_networkx(seed)
    print("✅ Cycle oracle")
    for n in sorted(EX_C4):
        test_ex_c4_values(n)
    test_ex_naive_agrees_with_pruned_search()
    test_ex_brute_small_and_limits()
    test_ex_result_dict()
    test_ex_c4_monotone_and_bounded()
    print("✅ ex(n, C4) table")
    for q, vertices, edges in [(2, 7, 9), (3, 13, 24), (5, 31, 90)]:
        test_polarity_graph(q, vertices, edges)
    test_polarity_graph_rejects_non_prime()
    for q in [2, 3, 5]:
        test_polarity_graph_within_bound(q)
    test_random_generators_are_seeded()
    test_small_families()
    print("✅ Generators")
    for k in [2, 3, 4, 5]:
        test_planted_level_pair_instances(k)
    for k in [3, 4, 5]:
        test_planted_well_placed_instances(k)
    print("✅ Planted instances")
    print("\n🎉 Oracle tests completed!")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""
Test Exploration
"""
import sys
import os

import pytest

# Thêm thư mục gốc vào path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.graph_core import Graph, PreconditionError
from src.exploration import ExplorationParams, explore, audit_min_degree, audit_growth
from src.oracle import gen_star, gen_complete_bipartite, gen_cycle, gen_min_degree_bipartite


def test_params_defaults_and_validation():
    p = ExplorationParams(k=3, d=2)
    assert p.delta == 27
    assert p.cap == 54
    with pytest.raises(PreconditionError) as info:
        ExplorationParams(k=1, d=1)
    assert info.value.item == 'k'
    with pytest.raises(PreconditionError):
        ExplorationParams(k=2, d=0)


def test_star_levels():
    e = explore(gen_star(5), 0, ExplorationParams(k=2, d=1), depth=2)
    assert e.V(0) == frozenset({0})
    assert e.V(1) == frozenset(range(1, 6))
    assert e.levels[1].tag == 'normal'
    assert e.V(2) == frozenset()
    assert e.depth == 2


def test_complete_bipartite_levels():
    e = explore(gen_complete_bipartite(3, 3), 0, ExplorationParams(k=2, d=1), depth=2)
    assert e.V(1) == frozenset({3, 4, 5})
    assert e.V(2) == frozenset({1, 2})
    assert e.parent[1] == 3
    assert e.root_path(2) == (2, 3, 0)
    assert e.level_of(4) == 1
    assert e.explored() == frozenset(range(6))


def test_big_level_keeps_every_candidate():
    edges = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (1, 6), (2, 7), (2, 8)]
    G = Graph.from_edges(9, edges)
    e = explore(G, 0, ExplorationParams(k=2, d=1, delta=1), depth=1)
    level = e.levels[1]
    assert level.is_big
    assert level.big_set == frozenset({1, 2})
    assert e.V(1) == frozenset({1, 2, 3, 4})


def test_normal_level_drops_big_vertices():
    # one vertex of high unexplored degree among many small ones
    edges = [(0, v) for v in range(1, 6)] + [(1, v) for v in range(6, 9)]
    G = Graph.from_edges(9, edges)
    e = explore(G, 0, ExplorationParams(k=2, d=1, delta=2), depth=2)
    assert e.levels[1].tag == 'normal'
    assert e.V(1) == frozenset({2, 3, 4, 5})
    assert e.V(2) == frozenset()
    with pytest.raises(PreconditionError):
        e.root_path(1)


def test_explore_rejects_bad_root():
    with pytest.raises(PreconditionError) as info:
        explore(gen_cycle(4), 7, ExplorationParams(k=2, d=1), depth=1)
    assert info.value.item == 'root'


def test_min_degree_audit_clean():
    G = gen_complete_bipartite(3, 3)
    audit = audit_min_degree(G, explore(G, 0, ExplorationParams(k=2, d=1), depth=2), 3)
    assert audit.hypotheses_satisfied
    assert audit.violations == []
    assert audit.checked == 5

    C8 = gen_cycle(8)
    audit = audit_min_degree(C8, explore(C8, 0, ExplorationParams(k=2, d=1), depth=3), 2)
    assert audit.hypotheses_satisfied
    assert audit.violations == []


def test_min_degree_audit_flags_hypotheses():
    G = gen_complete_bipartite(3, 3)
    e = explore(G, 0, ExplorationParams(k=2, d=1, delta=1), depth=2)
    audit = audit_min_degree(G, e, 3)
    assert not audit.hypotheses_satisfied
    assert 'delta 3 > cap 1' in audit.reasons

    C5 = gen_cycle(5)
    audit = audit_min_degree(C5, explore(C5, 0, ExplorationParams(k=2, d=1), depth=2), 2)
    assert 'graph is not bipartite' in audit.reasons


@pytest.mark.parametrize("k", [2, 3])
def test_min_degree_audit_random_bipartite(k):
    big_levels = 0
    for seed in range(500):
        delta = 2 + seed % 3
        G = gen_min_degree_bipartite(6 + seed % 3, 8, delta, seed)
        # cap equal to delta, the tightest cap the audit accepts
        p = ExplorationParams(k=k, d=1, delta=delta)
        assert p.cap == delta
        for root in (0, G.n - 1):
            e = explore(G, root, p, depth=k + 1)
            audit = audit_min_degree(G, e, delta)
            assert audit.hypotheses_satisfied
            assert audit.violations == []
            big_levels += sum(1 for level in e.levels if level.is_big)
    assert big_levels > 0


@pytest.mark.parametrize("seed", range(20))
def test_levels_are_disjoint_independent_sets(seed):
    G = gen_min_degree_bipartite(9, 7, 2, seed)
    e = explore(G, seed % G.n, ExplorationParams(k=3, d=1, delta=1), depth=5)
    seen = set()
    for level in e.levels:
        assert not seen & level.chosen
        seen |= level.chosen
        assert not any(G.has_edge(u, v) for u in level.chosen for v in level.chosen)
    assert e.frontier.isdisjoint(seen)


def test_growth_audit_rows():
    G = gen_complete_bipartite(3, 3)
    p = ExplorationParams(k=2, d=3)
    audit = audit_growth(G, explore(G, 0, p, depth=2), p)
    assert len(audit.inequalities) == 10
    first = audit.inequalities[0]
    assert (first.id, first.i, first.lhs, first.rhs, first.holds) == ('(5)', 0, 3.0, 3.0, True)
    assert audit.inequalities[-1].id == '(final)'
    assert audit.to_dict()['levels'][1] == {'i': 1, 'size': 3, 'tag': 'normal'}


def test_growth_audit_reports_failure():
    G = gen_star(5)
    p = ExplorationParams(k=2, d=6)
    audit = audit_growth(G, explore(G, 0, p, depth=1), p)
    assert len(audit.inequalities) == 4
    row = audit.inequalities[0]
    assert row.id == '(5)' and not row.holds
    assert row in audit.failures()


def main():
    print("🧪 Testing Exploration...")
    test_params_defaults_and_validation()
    test_star_levels()
    test_complete_bipartite_levels()
    test_big_level_keeps_every_candidate()
    test_normal_level_drops_big_vertices()
    print("✅ Level construction")
    test_min_degree_audit_clean()
    test_min_degree_audit_flags_hypotheses()
    for k in [2, 3]:
        test_min_degree_audit_random_bipartite(k)
    for seed in range(20):
        test_levels_are_disjoint_independent_sets(seed)
    print("✅ Min-degree audit")
    test_growth_audit_rows()
    test_growth_audit_reports_failure()
    print("✅ Growth audit")
    print("\n🎉 Exploration tests completed!")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""
Test Even Cycle Pipeline
"""
import sys
import os
import json
import math

import pytest

# Thêm thư mục gốc vào path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.graph_core import Graph, PreconditionError, verify_cycle
from src.exploration import ExplorationParams, explore
from src.theta_search import ThetaGraph
from src.trilayered import DichotomyResult, WellPlacedCert
from src.oracle import (
    gen_complete_bipartite, gen_cycle, gen_path, gen_polarity_graph, gen_star,
    gen_planted_extraction,
)
from src.cycle_pipeline import (
    extract_cycle, bound, d_threshold, theorem_hypotheses, audit_bound,
    EvenCyclePipeline, find_even_cycle,
)


def _fan_instance():
    """Root 0 over a, b, c = 1, 2, 3; theta a p b q c r with chord a q (p, q, r = 4, 5, 6)"""
    edges = [(0, 1), (0, 2), (0, 3),
             (1, 4), (4, 2), (2, 5), (5, 3), (3, 6), (6, 1), (1, 5)]
    G = Graph.from_edges(7, edges)
    theta = ThetaGraph(cycle=(1, 4, 2, 5, 3, 6), chord=(1, 5))
    return G, theta


def test_extract_cycle_from_level_pair():
    G, theta = _fan_instance()
    e = explore(G, 0, ExplorationParams(k=2, d=1, delta=100), depth=2)
    cycle = extract_cycle(G, e, 1, theta, 2)
    assert cycle.vertices == (0, 1, 4, 2)
    assert verify_cycle(G, cycle, 4)


def test_extract_cycle_rejects_bad_input():
    G, theta = _fan_instance()
    e = explore(G, 0, ExplorationParams(k=2, d=1, delta=100), depth=2)
    with pytest.raises(PreconditionError) as info:
        extract_cycle(G, e, 3, theta, 2)
    assert info.value.item == 'i'
    with pytest.raises(PreconditionError) as info:
        extract_cycle(G, e, 1, theta, 4)
    assert info.value.item == 'length'
    with pytest.raises(PreconditionError) as info:
        extract_cycle(G, e, 1, ThetaGraph(cycle=(1, 4, 2, 5, 3, 6), chord=(4, 3)), 2)
    assert info.value.item == 'cert'
    with pytest.raises(PreconditionError) as info:
        extract_cycle(G, e, 2, theta, 2)
    assert info.value.item == 'layers'


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_extract_cycle_planted_level_pair(k):
    for seed in range(100):
        instance = gen_planted_extraction(k, seed)
        e = instance.explore()
        cycle = extract_cycle(instance.graph, e, instance.level, instance.cert, k)
        assert verify_cycle(instance.graph, cycle, 2 * k)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_extract_cycle_planted_well_placed(k):
    for seed in range(100):
        instance = gen_planted_extraction(k, seed, well_placed=True)
        e = instance.explore()
        cycle = extract_cycle(instance.graph, e, instance.level, instance.cert, k)
        assert verify_cycle(instance.graph, cycle, 2 * k)


def test_bound_values():
    assert bound(100, 2) == pytest.approx(98192.8, abs=0.05)
    assert bound(1, 3) == pytest.approx(80 * math.sqrt(3 * math.log(3)) + 90)
    assert d_threshold(1, 2) == pytest.approx(20 * math.sqrt(2 * math.log(2)))
    with pytest.raises(PreconditionError) as info:
        bound(10, 1)
    assert info.value.item == 'k'
    with pytest.raises(PreconditionError) as info:
        bound(0, 2)
    assert info.value.item == 'n'


def test_theorem_hypotheses_flags():
    checks = theorem_hypotheses(gen_complete_bipartite(3, 3), 2, 1)
    assert checks['bipartite']
    assert not checks['k_at_least_4']
    assert not checks['min_degree']
    assert not checks['holds']


def test_audit_bound():
    audit = audit_bound(gen_polarity_graph(3), 2)
    assert audit.c2k_free is True
    assert audit.within_bound is True
    assert not audit.n_in_regime

    audit = audit_bound(gen_complete_bipartite(3, 3), 2)
    assert audit.c2k_free is False
    assert audit.within_bound is None

    audit = audit_bound(gen_cycle(50), 2, oracle_cap=40)
    assert audit.to_dict()['c2k_free'] == 'unknown'


@pytest.mark.parametrize("k", [2, 3, 4])
def test_pipeline_finds_cycle_in_complete_bipartite(k):
    G = gen_complete_bipartite(k, k)
    report = find_even_cycle(G, k, 1)
    assert report.found
    assert report.route == 'oracle'
    assert verify_cycle(G, report.cycle, 2 * k)
    assert json.loads(report.to_json())['result'] == 'cycle'


def test_pipeline_level_route_on_fan():
    G, _ = _fan_instance()
    report = find_even_cycle(G, 2, 1, use_oracle=False, max_roots=1)
    assert report.route == 'levels'
    assert verify_cycle(G, report.cycle, 4)
    assert report.level_hits[0]['kind'] == 'level_pair'


@pytest.mark.parametrize("seed", range(20))
def test_pipeline_on_planted_c4(seed):
    instance = gen_planted_extraction(2, seed)
    report = find_even_cycle(instance.graph, 2, 1)
    assert report.found
    assert verify_cycle(instance.graph, report.cycle, 4)


def test_pipeline_reports_none():
    report = find_even_cycle(gen_polarity_graph(3), 2, 1)
    assert not report.found
    assert report.result == 'none'
    assert report.reason.startswith('no theta found at any level')
    assert 'k_at_least_4' in report.reason

    for forest in (gen_path(9), gen_star(6)):
        assert not find_even_cycle(forest, 3, 1).found

    empty = find_even_cycle(Graph.empty(4), 2, 1)
    assert empty.reason == 'graph has no edges'


def test_pipeline_validates_parameters():
    with pytest.raises(PreconditionError):
        EvenCyclePipeline(1, 1)
    with pytest.raises(PreconditionError):
        EvenCyclePipeline(2, 0)


def _stub_dichotomy(kind: str, seen: list):
    theta = ThetaGraph(cycle=(0, 1, 2, 3), chord=(0, 2))

    def fake(T, p, k, d, delta, rng=None, cap=None):
        seen.append((T.v1, T.v2, T.v3))
        if kind == 'theta':
            return DichotomyResult('theta', theta=theta, route='min_degree')
        return DichotomyResult('well_placed', cert=WellPlacedCert(theta, {1: 4}),
                               route='constructive')
    return fake


def test_well_placed_stage_uses_dichotomy_above_cap():
    G = gen_cycle(8)
    pipeline = EvenCyclePipeline(2, 1, cap=0)
    e = explore(G, 0, pipeline.params, depth=2)
    seen = []
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr('src.cycle_pipeline.trilayered_dichotomy', _stub_dichotomy('well_placed', seen))
        hit = pipeline._well_placed(G, e, 1)
    assert seen == [(frozenset({0}), frozenset({1, 7}), frozenset({2, 6}))]
    assert hit[0] == 'well_placed' and hit[1] == 1 and hit[3] == 'constructive'
    assert hit[2].witnesses == {1: 4}


def test_well_placed_stage_maps_theta_to_level_pair():
    G = gen_cycle(8)
    pipeline = EvenCyclePipeline(2, 1, cap=0)
    e = explore(G, 0, pipeline.params, depth=2)
    seen = []
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr('src.cycle_pipeline.trilayered_dichotomy', _stub_dichotomy('theta', seen))
        hit = pipeline._well_placed(G, e, 2)
        assert pipeline._well_placed(G, e, 1) is None
    assert seen[0] == (frozenset({1, 7}), frozenset({2, 6}), frozenset({3, 5}))
    assert hit[:2] == ('level_pair', 1)
    assert hit[2].chord == (0, 2) and hit[3] == 'min_degree'


def main():
    print("🧪 Testing Even Cycle Pipeline...")
    test_extract_cycle_from_level_pair()
    test_extract_cycle_rejects_bad_input()
    for k in [2, 3, 4, 5]:
        test_extract_cycle_planted_level_pair(k)
    for k in [3, 4, 5]:
        test_extract_cycle_planted_well_placed(k)
    print("✅ Cycle extraction")
    test_bound_values()
    test_theorem_hypotheses_flags()
    test_audit_bound()
    print("✅ Bound calculator and audit")
    for k in [2, 3, 4]:
        test_pipeline_finds_cycle_in_complete_bipartite(k)
    test_pipeline_level_route_on_fan()
    for seed in range(20):
        test_pipeline_on_planted_c4(seed)
    test_pipeline_reports_none()
    test_pipeline_validates_parameters()
    test_well_placed_stage_uses_dichotomy_above_cap()
    test_well_placed_stage_maps_theta_to_level_pair()
    print("✅ End-to-end pipeline")
    print("\n🎉 Pipeline tests completed!")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""
Test Results Database
"""
import sys
import os
import json

# Thêm thư mục gốc vào path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.database import Database, graph_hash
from src.oracle import ex_brute, gen_cycle, gen_complete_bipartite
from src.cycle_pipeline import find_even_cycle


def test_graph_hash_is_stable():
    assert graph_hash(gen_cycle(5)) == graph_hash(gen_cycle(5))
    assert graph_hash(gen_cycle(5)) != graph_hash(gen_cycle(6))


def test_ex_results_round_trip(tmp_path):
    db = Database(str(tmp_path / "nested" / "results.db"))
    assert db.get_ex_result(5, 2) is None

    result = ex_brute(5, 2)
    db.save_ex_result(5, 2, result.ex, result.witness, result.strategy)
    row = db.get_ex_result(5, 2)
    assert row['ex'] == 6
    assert row['strategy'] == 'pruned'
    assert row['witness'].edges == result.witness.edges

    # a second save for the same (n, k) replaces the row
    db.save_ex_result(5, 2, 6, gen_cycle(5), 'naive')
    assert db.get_ex_result(5, 2)['strategy'] == 'naive'


def test_pipeline_runs_are_logged(tmp_path):
    db = Database(str(tmp_path / "results.db"))
    G = gen_complete_bipartite(2, 2)
    report = find_even_cycle(G, 2, 1, database=db)
    find_even_cycle(gen_cycle(6), 2, 1, database=db)

    runs = db.get_recent_runs()
    assert len(runs) == 2
    assert runs[0]['result'] == 'none'
    assert runs[1]['result'] == 'cycle'
    assert runs[1]['graph_hash'] == graph_hash(G)
    assert json.loads(runs[1]['report_json'])['cycle'] == list(report.cycle.vertices)
    assert len(db.get_recent_runs(limit=1)) == 1


def main():
    import tempfile
    import pathlib
    print("🧪 Testing Results Database...")
    test_graph_hash_is_stable()
    with tempfile.TemporaryDirectory() as tmp:
        test_ex_results_round_trip(pathlib.Path(tmp))
        print("✅ ex(n, C_2k) cache")
    with tempfile.TemporaryDirectory() as tmp:
        test_pipeline_runs_are_logged(pathlib.Path(tmp))
        print("✅ Pipeline run ledger")
    print("\n🎉 Database tests completed!")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""
Test Command Line
"""
import sys
import os
import json

import pytest

# Thêm thư mục gốc vào path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.cli import (
    main, EXIT_FOUND, EXIT_STRICT, EXIT_USAGE, EXIT_NONE, EXIT_BUDGET,
)
from src.graph_core import write_graph_file, read_graph_file
from src.oracle import gen_complete_bipartite, gen_cycle, gen_polarity_graph


@pytest.fixture
def run(tmp_path):
    """main() with logs and the results ledger kept under tmp_path"""
    def _run(*argv):
        return main(['--log-file', str(tmp_path / 'cli.log'),
                     '--db', str(tmp_path / 'results.db'), *argv])
    return _run


def _graph_file(tmp_path, G, name='g.txt'):
    path = str(tmp_path / name)
    write_graph_file(G, path)
    return path


def test_bound_prints_one_decimal(run, capsys):
    assert run('bound', '--n', '100', '--k', '2') == EXIT_FOUND
    assert capsys.readouterr().out.strip() == '98192.8'
    assert run('bound', '--n', '100', '--k', '1') == EXIT_USAGE


def test_usage_errors(run, tmp_path):
    assert run('bound', '--n', 'ten', '--k', '2') == EXIT_USAGE
    assert run('no-such-command') == EXIT_USAGE
    bad = tmp_path / 'bad.txt'
    bad.write_text("2 1\n0 0\n")
    assert run('find-cycle', str(bad), '--k', '2') == EXIT_USAGE
    assert run('find-cycle', str(tmp_path / 'missing.txt'), '--k', '2') == EXIT_USAGE


def test_find_cycle(run, tmp_path, capsys):
    path = _graph_file(tmp_path, gen_complete_bipartite(3, 3))
    report_path = str(tmp_path / 'report.json')
    assert run('find-cycle', path, '--k', '3', '--json', report_path) == EXIT_FOUND
    printed = capsys.readouterr().out.split()
    assert len(printed) == 6
    with open(report_path) as f:
        assert json.load(f)['result'] == 'cycle'


def test_find_cycle_none(run, tmp_path, capsys):
    path = _graph_file(tmp_path, gen_polarity_graph(3))
    assert run('find-cycle', path, '--k', '2', '--no-cache') == EXIT_NONE
    assert capsys.readouterr().out.startswith('none (')


def test_find_cycle_in_forest(run, tmp_path, capsys):
    forest = tmp_path / "forest.txt"
    forest.write_text("5 3\n0 1\n1 2\n3 4\n")
    assert run("find-cycle", str(forest), "--k", "2") == EXIT_NONE
    assert capsys.readouterr().out.startswith("none (")


def test_ex_uses_cache(run, tmp_path, capsys):
    assert run('ex', '--n', '6', '--k', '2') == EXIT_FOUND
    assert run('ex', '--n', '6', '--k', '2') == EXIT_FOUND
    assert capsys.readouterr().out.split() == ['7', '7']
    assert run('ex', '--n', '5', '--k', '2', '--naive', '--no-cache') == EXIT_FOUND
    assert capsys.readouterr().out.strip() == '6'
    assert run('ex', '--n', '30', '--k', '2', '--no-cache') == EXIT_BUDGET


def test_gen_writes_graph_and_layers(run, tmp_path, capsys):
    out = str(tmp_path / 'polarity.txt')
    assert run('gen', 'polarity', '--q', '3', '--out', out) == EXIT_FOUND
    assert read_graph_file(out).num_edges == 24

    layered = str(tmp_path / 'layered.txt')
    assert run('gen', 'trilayered', '--n1', '3', '--n2', '3', '--n3', '2',
               '--p', '1', '--p23', '1', '--out', layered) == EXIT_FOUND
    assert os.path.exists(layered + '.layers')

    assert run('gen', 'cycle', '--n', '4') == EXIT_FOUND
    assert capsys.readouterr().out == "4 4\n0 1\n0 3\n1 2\n2 3\n"


def test_theta_routes(run, tmp_path, capsys):
    path = _graph_file(tmp_path, gen_complete_bipartite(3, 3))
    assert run('theta', path, '--k', '3') == EXIT_FOUND
    out = capsys.readouterr().out
    assert 'cycle: 0 3 1 4 2 5' in out
    assert 'chord: 1 5  (route min-degree)' in out

    cycle = _graph_file(tmp_path, gen_cycle(6), 'c6.txt')
    assert run('theta', cycle, '--k', '2') == EXIT_NONE
    assert run('theta', cycle, '--k', '3', '--route', 'min-degree') == EXIT_USAGE


def test_well_placed_exhaustive(run, tmp_path, capsys):
    edges = "7 10\n0 4\n0 5\n0 6\n1 4\n1 5\n2 5\n2 6\n3 4\n3 5\n3 6\n"
    graph = tmp_path / 'wp.txt'
    graph.write_text(edges)
    layers = tmp_path / 'wp.layers'
    layers.write_text("0 1 2 3\n4 5 6\n\n")
    assert run('well-placed', str(graph), str(layers), '--k', '3') == EXIT_FOUND
    out = capsys.readouterr().out
    assert 'cycle: 0 4 1 5 2 6' in out


def test_explore_strict(run, tmp_path, capsys):
    path = _graph_file(tmp_path, gen_complete_bipartite(3, 3))
    report_path = str(tmp_path / 'explore.json')
    assert run('explore', path, '--root', '0', '--k', '2', '--d', '1',
               '--json', report_path) == EXIT_FOUND
    with open(report_path) as f:
        report = json.load(f)
    assert report['levels'][1]['chosen'] == [3, 4, 5]
    assert (report['levels'][1]['size'], report['levels'][1]['tag']) == (3, 'normal')
    assert len(report['inequalities']) == 10
    assert report['inequalities'][0]['id'] == '(5)'
    assert report['inequalities'][-1]['id'] == '(final)'
    out = capsys.readouterr().out
    assert '(final)' in out and 'lhs' in out
    assert run('explore', path, '--root', '0', '--k', '2', '--d', '1', '--delta', '1',
               '--strict') == EXIT_STRICT


def test_audit_bound(run, tmp_path, capsys):
    path = _graph_file(tmp_path, gen_polarity_graph(3))
    assert run('audit-bound', path, '--k', '2', '--strict') == EXIT_FOUND
    assert 'c2k_free' in capsys.readouterr().out


def run_all():
    print("🧪 Testing Command Line...")
    code = pytest.main([__file__, "-q"])
    if code == 0:
        print("\n🎉 Command line tests completed!")
    return code


if __name__ == "__main__":
    sys.exit(run_all())

"""
Tests for the convergence lab
"""

import math

import pandas as pd
import pytest

from corpus import random_connected
from graph_core import Graph
from lab import (
    CONVERGENCE_COLUMNS,
    LOWER_BOUND_COLUMNS,
    RESPECT_COLUMNS,
    TILE_COLUMNS,
    RespectResult,
    bound_violations,
    convergence_curves,
    convergence_sweep,
    edge_connectivity,
    export_convergence_csv,
    ladder_curves,
    ladder_lower_bound,
    lower_bound,
    lower_bound_frame,
    lower_bound_holds,
    norm2_bound,
    one_respecting_check,
    plot_convergence,
    records_frame,
    respecting_frame,
    respecting_k_cap,
    smallest_respecting_k,
    thorup_bound,
    tile_frame,
)
from ladder import TileString


def triangle_with_pendant():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)])


def k4():
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def test_bound_formulas():
    assert thorup_bound(4, 1, 1) == pytest.approx(math.sqrt(6 * math.log(4)))
    assert norm2_bound(9, 2) == pytest.approx(3 * math.log(3) / 2)
    assert lower_bound(96, 2) == pytest.approx(0.5 * math.sqrt(96 / 6) / 96)
    assert lower_bound(96, 2, c=1) == pytest.approx(1 / 24)


def test_exact_balance_gives_zero_error():
    records = convergence_curves(triangle_with_pendant(), 6)
    assert [r.k for r in records] == list(range(1, 7))
    at3 = records[2]
    assert at3.err_inf == 0 and at3.err_2 == 0 and at3.dist_2 == 0
    assert records[0].err_inf == pytest.approx(2 / 3)


@pytest.mark.parametrize("graph", [triangle_with_pendant(), k4()])
def test_small_graphs_stay_within_bounds(graph):
    records = convergence_curves(graph, 60)
    assert bound_violations(records) == []


def test_recorded_steps_and_errors():
    with pytest.raises(ValueError):
        convergence_curves(k4(), 0)
    records = convergence_curves(k4(), 20, ks=[5, 10, 40])
    assert [r.k for r in records] == [5, 10]


def test_frames_and_csv(tmp_path):
    records = convergence_curves(k4(), 10, ks=[2, 4])
    assert list(records_frame(records).columns) == CONVERGENCE_COLUMNS
    assert 'radius' in records_frame(records, full=True).columns
    assert list(records_frame([]).columns) == CONVERGENCE_COLUMNS
    path = export_convergence_csv(records, tmp_path / 'curves.csv')
    frame = pd.read_csv(path)
    assert list(frame['k']) == [2, 4]


def test_ladder_record_at_three_trees():
    (record,) = ladder_curves(8, 3, ks=[3])
    assert record.err_inf == pytest.approx(7 / 22)
    assert record.thorup == pytest.approx(thorup_bound(22, 3, 2))
    assert lower_bound_holds(record)
    assert not record.violations()


def test_tile_frame():
    trace = [TileString(('b1', 'm6', 'm1', 'z2'), 0, 39, k=54)]
    frame = tile_frame(trace)
    assert list(frame.columns) == TILE_COLUMNS
    assert frame['tiles'][0] == 'b1,m6,m1,z2'


def test_bridge_is_crossed_once_by_the_first_tree():
    g = triangle_with_pendant()
    assert edge_connectivity(g) == 1
    assert one_respecting_check(g, 3) == RespectResult(True, 0, frozenset({0, 1, 2}), 1)
    assert smallest_respecting_k(g) == 1
    assert respecting_k_cap(g, 1) == 128


def test_four_cycle_respecting_tree():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    result = one_respecting_check(g, 2)
    assert result == RespectResult(True, 0, frozenset({0}), 2)


def test_sweep_and_plot(tmp_path):
    frame = convergence_sweep({'k4': k4(), 'pendant': triangle_with_pendant()}, 8, ks=[4, 8])
    assert list(frame['graph']) == ['k4', 'k4', 'pendant', 'pendant']
    assert 'err_sq' in frame.columns

    records = convergence_curves(k4(), 30)
    path = plot_convergence(records, tmp_path / 'plots' / 'k4.svg', title='K4')
    text = path.read_text()
    assert '<svg' in text


def test_ladder_lower_bound_is_stronger_on_the_triple_ladder():
    assert ladder_lower_bound(96) == pytest.approx(lower_bound(96, 2))
    assert ladder_lower_bound(288) == pytest.approx(math.sqrt(3) * lower_bound(288, 6))
    assert ladder_lower_bound(1152) == pytest.approx(0.006014, abs=1e-6)


def test_triple_ladder_error_is_a_third_of_the_single_one():
    single = ladder_curves(12, 20, ks=[5, 10, 20])
    triple = ladder_curves(12, 60, w=3, ks=[15, 30, 60])
    for a, b in zip(single, triple):
        assert b.err_inf == pytest.approx(a.err_inf / 3)


def test_lower_bound_frame():
    records = ladder_curves(8, 6, ks=[3, 6])
    frame = lower_bound_frame(records, 2)
    assert list(frame.columns) == LOWER_BOUND_COLUMNS
    assert list(frame['k']) == [3, 6]
    assert list(frame['bound']) == pytest.approx(list(frame['lambda_bound']))
    assert frame['holds'][0]


@pytest.mark.slow
def test_single_ladder_meets_the_lower_bound():
    records = ladder_curves(100, 864, ks=[96, 384, 864])
    scaled = [r.k * r.err_inf for r in records]
    assert scaled == pytest.approx([3.89, 6.57, 10.03], abs=0.01)
    for record in records:
        assert record.k * record.err_inf >= 0.5 * math.sqrt(record.k / 6)
        assert lower_bound_holds(record)


@pytest.mark.slow
def test_triple_ladder_misses_the_lower_bound_at_1152():
    records = ladder_curves(100, 1152, w=3, ks=[288, 1152])
    frame = lower_bound_frame(records, 6)
    assert list(frame['holds']) == [True, False]
    late = records[1]
    assert late.err_inf == pytest.approx(0.005704, abs=5e-6)
    assert late.err_inf < ladder_lower_bound(1152)
    assert late.err_inf >= lower_bound(1152, 6)


def test_respecting_frame_reports_the_smallest_k():
    graphs = {
        'pendant': triangle_with_pendant(),
        'cycle': Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    }
    frame = respecting_frame(graphs)
    assert list(frame.columns) == RESPECT_COLUMNS
    assert list(frame['graph']) == ['pendant', 'cycle']
    assert list(frame['lam']) == [1, 2]
    assert list(frame['k']) == [1, 1]
    assert list(frame['cap']) == [128, 1024]


@pytest.mark.slow
def test_one_respecting_trees_on_twenty_graphs():
    graphs = {}
    for i in range(20):
        n = 4 + i % 9
        graphs[f"c{i:02d}"] = random_connected(n, n + 2 + i % 6, seed=40 + i)
    frame = respecting_frame(graphs)
    assert len(frame) == 20
    assert (frame['n'] <= 12).all()
    assert frame['k'].notna().all()
    assert (frame['k'] <= frame['cap']).all()


@pytest.mark.slow
def test_thorup_bound_on_connected_corpus():
    for seed in range(10):
        n = 4 + seed % 7
        g = random_connected(n, 2 * n, seed=seed)
        records = convergence_curves(g, 1000)
        assert [v for v in bound_violations(records) if v[1] == 'thorup'] == [], seed


@pytest.mark.slow
@pytest.mark.parametrize("d", [10, 30, 100])
def test_thorup_bound_on_ladders(d):
    records = ladder_curves(d, 5000)
    assert len(records) == 5000
    assert [v for v in bound_violations(records) if v[1] == 'thorup'] == []


@pytest.mark.slow
def test_long_run_on_triangle_with_pendant():
    records = convergence_curves(triangle_with_pendant(), 100_000)
    assert bound_violations(records) == []
    last = records[-1]
    assert last.k == 100_000
    assert last.dist_2 <= last.radius <= 0.05

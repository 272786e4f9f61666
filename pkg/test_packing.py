"""
Tests for static greedy base packing
"""

import math
from fractions import Fraction

import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import EmptyActiveSet, EmptyGraph
from graph_core import Graph
from packing import (
    BICIRCULAR,
    GRAPHIC,
    GreedyPacker,
    PackingState,
    PruneConfig,
    greedy_base,
    is_base,
    is_independent,
    load_cap_check,
    min_load_estimate,
    min_weight_base,
    pack,
    pack_pruned,
    potential_check,
    rank,
    threshold_k,
)

K4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)])


def k4(pendant=False):
    pairs = K4 + ([(0, 4)] if pendant else [])
    return Graph.from_edges(5 if pendant else 4, pairs)


def test_ranks():
    g = triangle()
    assert rank(g, GRAPHIC) == 2
    assert rank(g, BICIRCULAR) == 3
    assert rank(k4(), BICIRCULAR) == 4
    assert is_base(g, GRAPHIC, [0, 2])
    assert not is_independent(g, GRAPHIC, [0, 1, 2])


def test_unknown_kind():
    with pytest.raises(ValueError):
        pack(triangle(), 'transversal', 3)


def test_triangle_bicircular_loads_are_one():
    st_ = pack(triangle(), BICIRCULAR, 7)
    assert st_.counts == {0: 7, 1: 7, 2: 7}
    assert min_load_estimate(st_) == 1


def test_triangle_graphic_balances_every_three_steps():
    st_ = pack(triangle(), GRAPHIC, 3, retain_bases=True)
    assert st_.bases == [[0, 1], [0, 2], [1, 2]]
    assert st_.loads() == {e: Fraction(2, 3) for e in range(3)}
    assert min_load_estimate(st_) == Fraction(3, 2)


def test_k4_bicircular_is_uniform():
    st_ = pack(k4(), BICIRCULAR, 12)
    assert set(st_.counts.values()) == {8}
    assert min_load_estimate(st_) == Fraction(3, 2)


def test_pendant_is_in_every_base():
    st_ = pack(k4(pendant=True), BICIRCULAR, 9, retain_bases=True)
    assert st_.counts[6] == 9
    assert all(6 in base for base in st_.bases)
    assert all(is_base(k4(pendant=True), BICIRCULAR, base) for base in st_.bases)


def test_loop_in_graphic_packing_is_never_used():
    g = triangle()
    g.add_edge(1, 1)
    st_ = pack(g, GRAPHIC, 4)
    assert st_.counts[3] == 0
    assert min_load_estimate(st_) == math.inf


def test_transforms_leave_the_packing_unchanged():
    g = k4(pendant=True)
    g.add_edge(2, 4)
    plain = pack(g, GRAPHIC, 20).counts
    for name in ('square', 'quartic', 'entropy'):
        assert pack(g, GRAPHIC, 20, transform=name).counts == plain
    with pytest.raises(ValueError):
        pack(g, GRAPHIC, 5, transform='cubic')


def test_order_changes_tie_breaks():
    g = triangle()
    st_ = pack(g, GRAPHIC, 1, retain_bases=True, order={0: 2, 1: 1, 2: 0})
    assert st_.bases == [[1, 2]]


def test_empty_graph_and_bad_k():
    with pytest.raises(EmptyGraph):
        pack(Graph(3), GRAPHIC, 2)
    with pytest.raises(ValueError):
        pack(triangle(), GRAPHIC, 0)


def test_prune_config():
    cfg = PruneConfig(4, 4)
    assert cfg.start(3) == math.ceil(24 * 4 * math.log(3))
    assert cfg.start(1) == 0
    assert not cfg.should_prune(100, 10, 3)
    late = cfg.start(3)
    assert cfg.should_prune(late, late, 3)
    assert not cfg.should_prune(late // 2, late, 3)
    with pytest.raises(ValueError):
        PruneConfig(3, 2)


def test_pruning_drops_the_overloaded_pendant():
    g = k4(pendant=True)
    st_ = pack_pruned(g, 12, 2.5, 2.5, c_prune=1)
    assert st_.pruned_at == {6: 5}
    assert st_.active == set(range(6))
    assert st_.counts[6] == 5
    assert all(st_.counts[e] == 8 for e in range(6))
    assert min_load_estimate(st_) == Fraction(3, 2)


def test_pruning_everything_raises():
    with pytest.raises(EmptyActiveSet):
        pack_pruned(triangle(), 50, 4, 4, c_prune=1)


def test_threshold_k():
    assert threshold_k(1, 3, 1.0) == 22
    assert threshold_k(2, 3, 0.5) == math.ceil(20 * 2 * math.log(3) / 0.25)


def test_potential_check_on_uniform_matroid():
    st_ = pack(k4(), BICIRCULAR, 12)
    check = potential_check(st_, Fraction(3, 2), 0.5)
    assert check.holds
    assert check.lhs == pytest.approx(math.log(6))
    below = potential_check(st_, Fraction(3, 2), -0.5)
    assert below.holds
    with pytest.raises(ValueError):
        potential_check(st_, 1, -1)


def test_load_cap_on_uniform_matroid():
    late = load_cap_check(pack(k4(), BICIRCULAR, 18), Fraction(3, 2), 1.0)
    assert late.applies and late.holds
    assert late.worst == Fraction(2, 3)
    assert late.cap == pytest.approx(4 / 3)
    early = load_cap_check(pack(k4(), BICIRCULAR, 12), Fraction(3, 2), 1.0)
    assert not early.applies and early.holds
    with pytest.raises(ValueError):
        load_cap_check(pack(k4(), BICIRCULAR, 3), 1, 0)


def test_estimate_at_threshold_on_uniform_matroid():
    k = threshold_k(1.5, 6, 0.5)
    assert k == 216
    assert min_load_estimate(pack(k4(), BICIRCULAR, k)) == Fraction(3, 2)


def test_min_weight_base_takes_the_free_chord():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    weights = {0: 1, 1: 1, 2: 1, 3: 1, 4: 0}
    assert min_weight_base(g, weights, GRAPHIC) == [0, 2, 4]


def test_greedy_base_with_preload():
    g = triangle()
    assert greedy_base(g, lambda e: e, GRAPHIC, edges=[1, 2], preload=[0]) == [1]


def test_state_frame_csv_and_persistence(tmp_path):
    st_ = pack(triangle(), GRAPHIC, 3)
    frame = st_.to_frame()
    assert list(frame.columns) == ['edge_id', 'count', 'k', 'load', 'active']
    assert list(frame['load']) == ['2/3'] * 3

    path = st_.export_csv(tmp_path / 'loads.csv')
    again = pd.read_csv(path)
    assert list(again['count']) == [2, 2, 2]

    saved = st_.save(tmp_path / 'state.joblib')
    loaded = PackingState.load_state(saved)
    assert loaded.counts == st_.counts
    assert loaded.k == 3
    assert list(loaded.load_vector()) == pytest.approx([2 / 3] * 3)


def test_packer_steps_incrementally():
    packer = GreedyPacker(k4(), kind=BICIRCULAR)
    assert packer.step() == [0, 1, 2, 3]
    assert packer.step() == [0, 1, 4, 5]
    assert packer.state.k == 2


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=12),
       st.integers(1, 8))
def test_every_packed_set_is_a_base(pairs, k):
    g = Graph.from_edges(5, pairs)
    for kind in (GRAPHIC, BICIRCULAR):
        st_ = pack(g, kind, k, retain_bases=True)
        assert all(is_base(g, kind, base) for base in st_.bases)
        assert sum(st_.counts.values()) == k * rank(g, kind)

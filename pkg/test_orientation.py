"""
Tests for the fractional orientation read off a layered packing
"""

import random
from fractions import Fraction

import pytest

from corpus import random_multigraph
from dynpacking import LayeredPacking
from errors import UncoveredEdge
from ideal import densest_exact
from orientation import orient_edge, outdeg_audit
from packing import BICIRCULAR, threshold_k


def packing_of(n, k, pairs):
    lp = LayeredPacking(n, k=k)
    for u, v in pairs:
        lp.lp_insert(u, v)
    return lp


def test_triangle_orientation():
    lp = packing_of(3, 4, [(0, 1), (1, 2), (2, 0)])
    for e in range(3):
        entry = orient_edge(lp, e)
        assert entry.d_uv + entry.d_vu == 1
        assert entry.coverage == 4
    audit = outdeg_audit(lp, rho=1, eps=0.5)
    assert audit.outdeg == {0: 1, 1: 1, 2: 1}
    assert audit.guaranteed
    assert audit.bound == 1.5
    assert audit.within_bound


def test_k4_outdegrees_equal_the_estimate():
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    lp = packing_of(4, 12, pairs)
    audit = outdeg_audit(lp)
    assert set(audit.outdeg.values()) == {lp.estimate()}
    assert audit.max_outdeg == Fraction(3, 2)
    assert audit.bound is None and audit.within_bound


def test_path_points_to_smallest_vertex():
    lp = packing_of(3, 2, [(2, 1), (1, 0)])
    assert orient_edge(lp, 1).d_uv == 1
    assert orient_edge(lp, 0).line() == "0 2 1 1 0 2"
    audit = outdeg_audit(lp)
    assert audit.outdeg == {0: 0, 1: 1, 2: 1}
    assert not audit.guaranteed


def test_loop_points_out_of_its_vertex():
    lp = packing_of(2, 3, [(1, 1)])
    entry = orient_edge(lp, 0)
    assert (entry.d_uv, entry.d_vu, entry.coverage) == (1, 0, 3)
    assert outdeg_audit(lp).outdeg == {0: 0, 1: 1}


def test_uncovered_edge():
    lp = packing_of(2, 1, [(0, 1), (0, 1), (0, 1)])
    with pytest.raises(UncoveredEdge):
        orient_edge(lp, 2)
    with pytest.raises(UncoveredEdge):
        outdeg_audit(lp)


def test_random_graph_outdegrees_sum_to_edge_count():
    rng = random.Random(8)
    pairs = [(rng.randrange(7), rng.randrange(7)) for _ in range(12)]
    lp = packing_of(7, 30, pairs)
    audit = outdeg_audit(lp)
    assert sum(audit.outdeg.values()) == 12
    for e in lp.graph.edge_ids():
        entry = orient_edge(lp, e)
        assert entry.d_uv + entry.d_vu == 1
        assert entry.coverage == lp.counts[e]


@pytest.mark.slow
def test_outdegree_within_bound_at_threshold():
    eps = 0.25
    checked = 0
    for seed in range(6):
        g = random_multigraph(5, 8, seed=seed)
        if g.is_forest():
            continue
        rho = densest_exact(g, BICIRCULAR).ratio
        lp = LayeredPacking(g.n, k=threshold_k(rho, g.m, eps))
        for e, (u, v) in sorted(g.edges.items()):
            lp.lp_insert(u, v, edge_id=e)
        audit = outdeg_audit(lp, rho=rho, eps=eps)
        assert audit.guaranteed
        assert audit.max_outdeg <= lp.estimate() <= (1 + Fraction(eps)) * rho
        assert audit.within_bound
        checked += 1
    assert checked

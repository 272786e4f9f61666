"""
Tests for the dynamic forest against a networkx oracle
"""

import math
import random

import networkx as nx
import pytest

from dyntree import DynForest
from errors import NotConnected, SameNode, UnknownEdge, VertexOutOfRange, WouldCreateCycle


def _oracle_path_max(oracle, u, v):
    path = nx.shortest_path(oracle, u, v)
    keys = [(oracle.edges[a, b]['key'], oracle.edges[a, b]['handle']) for a, b in zip(path, path[1:])]
    return max(keys)[1]


def _random_forest_ops(n, steps, seed):
    rng = random.Random(seed)
    forest = DynForest(n, seed=seed)
    oracle = nx.Graph()
    oracle.add_nodes_from(range(n))
    next_id = 0
    for _ in range(steps):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and not nx.has_path(oracle, u, v):
            key = (rng.randrange(100), next_id)
            handle = forest.link(u, v, key)
            oracle.add_edge(u, v, key=key, handle=handle)
            next_id += 1
        elif oracle.number_of_edges() and rng.random() < 0.5:
            a, b = rng.choice(sorted(oracle.edges()))
            forest.cut(oracle.edges[a, b]['handle'])
            oracle.remove_edge(a, b)
        yield forest, oracle, rng


def test_link_cut_connectivity_and_size():
    for forest, oracle, rng in _random_forest_ops(30, 400, seed=1):
        u, v = rng.randrange(30), rng.randrange(30)
        assert forest.connected(u, v) == nx.has_path(oracle, u, v)
        comp = nx.node_connected_component(oracle, u)
        assert forest.tree_size(u) == len(comp)
        assert forest.tree_vertex_min(u) == min(comp)


def test_path_max_matches_oracle():
    for forest, oracle, rng in _random_forest_ops(25, 400, seed=2):
        u, v = rng.randrange(25), rng.randrange(25)
        if u != v and nx.has_path(oracle, u, v):
            assert forest.path_max(u, v) == _oracle_path_max(oracle, u, v)


def test_tree_min_and_tree_id():
    for forest, oracle, rng in _random_forest_ops(20, 300, seed=3):
        u = rng.randrange(20)
        comp = nx.node_connected_component(oracle, u)
        edges = [oracle.edges[a, b] for a, b in oracle.subgraph(comp).edges()]
        if not edges:
            assert forest.tree_min(u) is None
            assert forest.tree_id(u) == -(u + 1)
        else:
            best = min(edges, key=lambda data: data['key'])['handle']
            assert forest.tree_min(u) == best
            assert forest.tree_id(u) == best


def test_on_path():
    forest = DynForest(5)
    e01 = forest.link(0, 1, (1, 0))
    e12 = forest.link(1, 2, (2, 1))
    e13 = forest.link(1, 3, (3, 2))
    assert forest.on_path(0, 2, e01)
    assert forest.on_path(2, 0, e12)
    assert not forest.on_path(0, 2, e13)
    assert not forest.on_path(3, 3, e13)


def test_error_cases():
    forest = DynForest(4)
    h = forest.link(0, 1, (5, 0))
    with pytest.raises(WouldCreateCycle):
        forest.link(1, 0, (6, 1))
    with pytest.raises(WouldCreateCycle):
        forest.link(2, 2, (6, 1))
    with pytest.raises(SameNode):
        forest.path_max(1, 1)
    with pytest.raises(NotConnected):
        forest.path_max(0, 3)
    with pytest.raises(VertexOutOfRange):
        forest.tree_size(4)
    forest.cut(h)
    with pytest.raises(UnknownEdge):
        forest.cut(h)
    with pytest.raises(KeyError):
        forest.key(h)


def test_payload_follows_its_anchor():
    forest = DynForest(4)
    a = forest.link(0, 1, (1, 0))
    forest.link(1, 2, (1, 1))
    forest.set_payload(2, 'cycle')
    assert forest.payload(0) == (2, 'cycle')
    assert forest.payload_count(0) == 1

    forest.cut(a)
    assert forest.payload(0) is None
    assert forest.payload(1) == (2, 'cycle')

    forest.set_payload(1, 'moved')
    assert forest.payload(2) == (1, 'moved')
    assert forest.payload_count(2) == 1
    forest.clear_payload(2)
    assert forest.payload(1) is None


def test_explicit_handles():
    forest = DynForest(3)
    forest.link(0, 1, (1, 0), handle=('pendant', 0))
    assert ('pendant', 0) in forest
    assert forest.endpoints(('pendant', 0)) == (0, 1)
    with pytest.raises(ValueError):
        forest.link(1, 2, (2, 0), handle=('pendant', 0))
    assert len(forest) == 1


def test_work_grows_logarithmically():
    n = 512
    steps = 3000
    forest = None
    for forest, _, _ in _random_forest_ops(n, steps, seed=4):
        pass
    assert forest.work / steps <= 50 * math.log2(n)

"""
Tests for the multigraph, update events and the text formats
"""

import pytest

from errors import (
    DuplicateEdgeId,
    InconsistentHeader,
    ParseError,
    UnknownEdgeId,
    VertexOutOfRange,
)
from graph_core import (
    DELETE,
    Graph,
    UpdateEvent,
    apply_update,
    format_update_stream,
    parse_graph_file,
    parse_update_stream,
    replay,
    stream_vertex_count,
)


def test_parse_path_graph():
    g = parse_graph_file("3 2\n0 0 1\n1 1 2\n")
    assert g.n == 3
    assert g.edges == {0: (0, 1), 1: (1, 2)}
    assert g.is_forest()


def test_parse_self_loop():
    g = parse_graph_file("2 1\n0 0 0\n")
    assert g.edges == {0: (0, 0)}
    assert not g.is_forest()
    assert g.adjacency[0] == [0]


def test_parse_skips_comments_and_blank_lines():
    g = parse_graph_file("# triangle\n3 3\n\n0 0 1\n1 1 2\n# closing edge\n2 2 0\n")
    assert g.m == 3


def test_inconsistent_header():
    with pytest.raises(InconsistentHeader):
        parse_graph_file("2 2\n0 0 1\n")


@pytest.mark.parametrize("text, line", [
    ("3 x\n", 1),
    ("3 1\n0 0\n", 2),
    ("3 1\n0 0 5\n", 2),
    ("3 2\n0 0 1\n0 1 2\n", 3),
])
def test_graph_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_graph_file(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_parse_stream_auto_ids():
    events = parse_update_stream("+ 0 1\n- 0\n")
    assert events == [UpdateEvent.insert(0, 1, 0), UpdateEvent.delete(0)]


def test_parse_stream_explicit_id_and_query():
    events = parse_update_stream("+ 5 0 1\n? density\n")
    assert events == [UpdateEvent.insert(0, 1, 5), UpdateEvent.query_density()]


def test_auto_ids_skip_past_explicit_ids():
    events = parse_update_stream("+ 3 0 1\n+ 1 2\n? orient 4\n")
    assert [ev.edge_id for ev in events] == [3, 4, 4]
    assert events[2] == UpdateEvent.query_orientation(4)


def test_bad_stream_line():
    with pytest.raises(ParseError) as info:
        parse_update_stream("x 0 1")
    assert info.value.line == 1


def test_stream_text_survives_formatting():
    text = "+ 0 0 1\n+ 1 1 2\n- 0\n? density\n? orient 1\n"
    assert format_update_stream(parse_update_stream(text)) == text


def test_edge_ids_are_never_reused():
    g = Graph(3)
    a = g.add_edge(0, 1)
    g.remove_edge(a)
    b = g.add_edge(0, 1)
    assert b == a + 1
    with pytest.raises(DuplicateEdgeId):
        g.add_edge(1, 2, edge_id=a)


def test_vertex_range_and_unknown_ids():
    g = Graph(2)
    with pytest.raises(VertexOutOfRange):
        g.add_edge(0, 2)
    with pytest.raises(UnknownEdgeId):
        g.remove_edge(7)
    with pytest.raises(KeyError):
        g.endpoints(7)


def test_parallel_edges_make_a_cycle():
    g = Graph.from_edges(2, [(0, 1), (1, 0)])
    assert not g.is_forest()
    assert g.endpoint_multiset() == [(0, 1), (0, 1)]


def test_apply_update_and_replay():
    events = parse_update_stream("+ 0 1\n+ 1 2\n- 0\n? density\n")
    g = replay(stream_vertex_count(events), events)
    assert g.n == 3
    assert g.edges == {1: (1, 2)}

    h = Graph(3)
    result = apply_update(h, UpdateEvent.insert(2, 0))
    assert result.edge_id == 0
    assert apply_update(h, UpdateEvent.delete(0)).kind == DELETE
    assert h.m == 0


def test_text_format_is_reparsed_to_the_same_graph():
    g = Graph.from_edges(4, [(0, 1), (1, 1), (2, 3), (3, 2)])
    again = parse_graph_file(g.to_text())
    assert again.edges == g.edges


def test_copy_is_independent():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    h = g.copy()
    h.remove_edge(0)
    assert g.has_edge(0)
    assert h.add_edge(0, 2) == 2


def test_to_networkx_keeps_parallel_edges():
    g = Graph.from_edges(2, [(0, 1), (0, 1), (1, 1)])
    nxg = g.to_networkx()
    assert nxg.number_of_edges() == 3
    assert nxg.number_of_nodes() == 2

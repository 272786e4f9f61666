"""
Graph Core
Multigraph with stable edge ids, update events, and file/stream parsing
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from errors import (
    DuplicateEdgeId,
    InconsistentHeader,
    ParseError,
    UnknownEdgeId,
    VertexOutOfRange,
)


INSERT = 'insert'
DELETE = 'delete'
QUERY_DENSITY = 'query_density'
QUERY_ORIENTATION = 'query_orientation'


@dataclass(frozen=True)
class UpdateEvent:
    """One line of an update stream"""
    kind: str
    u: Optional[int] = None
    v: Optional[int] = None
    edge_id: Optional[int] = None

    @classmethod
    def insert(cls, u, v, edge_id=None):
        return cls(INSERT, u, v, edge_id)

    @classmethod
    def delete(cls, edge_id):
        return cls(DELETE, edge_id=edge_id)

    @classmethod
    def query_density(cls):
        return cls(QUERY_DENSITY)

    @classmethod
    def query_orientation(cls, edge_id):
        return cls(QUERY_ORIENTATION, edge_id=edge_id)

    @property
    def is_update(self):
        return self.kind in (INSERT, DELETE)


@dataclass(frozen=True)
class UpdateResult:
    """What apply_update changed"""
    kind: str
    edge_id: Optional[int] = None
    endpoints: Optional[Tuple[int, int]] = None


class Graph:
    """Undirected multigraph on a fixed vertex set 0..n-1

    Self-loops and parallel edges are allowed. Edge ids come from a monotone
    counter and are never handed out twice, even after deletion.
    """

    def __init__(self, n):
        if n < 0:
            raise ValueError(f"Vertex count must be non-negative: {n}")
        self.n = n
        self.edges: Dict[int, Tuple[int, int]] = {}
        self.adjacency: List[List[int]] = [[] for _ in range(n)]
        self._next_id = 0
        self._used_ids = set()

    @property
    def m(self):
        return len(self.edges)

    def _check_vertex(self, v):
        if not isinstance(v, int) or v < 0 or v >= self.n:
            raise VertexOutOfRange(f"Vertex {v} outside 0..{self.n - 1}")

    def add_edge(self, u, v, edge_id=None):
        """
        Insert edge (u, v)

        Args:
            u, v: endpoints (u == v gives a self-loop)
            edge_id: explicit id, or None for the next fresh id

        Returns:
            the edge id
        """
        self._check_vertex(u)
        self._check_vertex(v)
        if edge_id is None:
            edge_id = self._next_id
        elif edge_id in self._used_ids:
            raise DuplicateEdgeId(f"Edge id {edge_id} was already used")
        elif edge_id < 0:
            raise ValueError(f"Edge ids must be non-negative: {edge_id}")
        self._next_id = max(self._next_id, edge_id + 1)
        self._used_ids.add(edge_id)

        self.edges[edge_id] = (u, v)
        self.adjacency[u].append(edge_id)
        if v != u:
            self.adjacency[v].append(edge_id)
        return edge_id

    def remove_edge(self, edge_id):
        """Delete an edge; returns its endpoints"""
        if edge_id not in self.edges:
            raise UnknownEdgeId(f"Unknown edge id: {edge_id}")
        u, v = self.edges.pop(edge_id)
        self.adjacency[u].remove(edge_id)
        if v != u:
            self.adjacency[v].remove(edge_id)
        return u, v

    def endpoints(self, edge_id):
        try:
            return self.edges[edge_id]
        except KeyError:
            raise UnknownEdgeId(f"Unknown edge id: {edge_id}") from None

    def has_edge(self, edge_id):
        return edge_id in self.edges

    def edge_ids(self):
        """Edge ids in increasing order"""
        return sorted(self.edges)

    def copy(self):
        g = Graph(self.n)
        for eid in self.edge_ids():
            g.add_edge(*self.edges[eid], edge_id=eid)
        g._next_id = self._next_id
        g._used_ids = set(self._used_ids)
        return g

    def is_forest(self):
        """True if the multigraph has no cycle (loops and parallel pairs count)"""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges.values():
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def endpoint_multiset(self):
        """Sorted endpoint pairs; equal for graphs with the same edges up to ids"""
        return sorted(tuple(sorted(p)) for p in self.edges.values())

    def to_text(self):
        """Serialize to the graph file format"""
        lines = [f"{self.n} {self.m}"]
        for eid in self.edge_ids():
            u, v = self.edges[eid]
            lines.append(f"{eid} {u} {v}")
        return "\n".join(lines) + "\n"

    def to_networkx(self):
        import networkx as nx
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.n))
        for eid, (u, v) in self.edges.items():
            g.add_edge(u, v, key=eid)
        return g

    @classmethod
    def from_edges(cls, n, pairs):
        """Build a graph whose edge ids follow the order of pairs"""
        g = cls(n)
        for u, v in pairs:
            g.add_edge(u, v)
        return g

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def apply_update(g, ev):
    """
    Apply one update event to the graph

    Queries leave the graph unchanged (but QueryOrientation still checks
    that its edge is present).

    Returns:
        UpdateResult with the inserted or removed edge id
    """
    if ev.kind == INSERT:
        eid = g.add_edge(ev.u, ev.v, edge_id=ev.edge_id)
        return UpdateResult(INSERT, eid, (ev.u, ev.v))
    if ev.kind == DELETE:
        endpoints = g.remove_edge(ev.edge_id)
        return UpdateResult(DELETE, ev.edge_id, endpoints)
    if ev.kind == QUERY_ORIENTATION:
        return UpdateResult(QUERY_ORIENTATION, ev.edge_id, g.endpoints(ev.edge_id))
    if ev.kind == QUERY_DENSITY:
        return UpdateResult(QUERY_DENSITY)
    raise ValueError(f"Unknown event kind: {ev.kind}")


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", line=lineno) from None


def parse_graph_file(text):
    """
    Parse the graph file format

    First line "n m", then m lines "id u v". Blank lines and '#' comment
    lines are skipped.
    """
    header = None
    g = None
    edge_lines = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise ParseError("header must be 'n m'", line=lineno)
            n, m = _ints(tokens, lineno)
            if n < 0 or m < 0:
                raise ParseError("negative header value", line=lineno)
            header = (n, m)
            g = Graph(n)
            continue
        if len(tokens) != 3:
            raise ParseError("edge line must be 'id u v'", line=lineno)
        eid, u, v = _ints(tokens, lineno)
        try:
            g.add_edge(u, v, edge_id=eid)
        except (VertexOutOfRange, DuplicateEdgeId, ValueError) as e:
            raise ParseError(str(e), line=lineno) from None
        edge_lines += 1

    if header is None:
        raise ParseError("missing header", line=1)
    if edge_lines != header[1]:
        raise InconsistentHeader(f"header declares {header[1]} edges, found {edge_lines}")
    return g


def parse_update_stream(text):
    """
    Parse an update stream into events

    Lines: "+ u v" | "+ id u v" | "- id" | "? density" | "? orient id".
    Inserts without an id get the next id of a sequential counter that
    also skips past explicit ids.
    """
    events = []
    next_id = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        op, args = tokens[0], tokens[1:]
        if op == '+':
            if len(args) == 2:
                u, v = _ints(args, lineno)
                eid = next_id
            elif len(args) == 3:
                eid, u, v = _ints(args, lineno)
            else:
                raise ParseError("insert must be '+ u v' or '+ id u v'", line=lineno)
            next_id = max(next_id, eid + 1)
            events.append(UpdateEvent.insert(u, v, eid))
        elif op == '-':
            if len(args) != 1:
                raise ParseError("delete must be '- id'", line=lineno)
            (eid,) = _ints(args, lineno)
            events.append(UpdateEvent.delete(eid))
        elif op == '?':
            if args == ['density']:
                events.append(UpdateEvent.query_density())
            elif len(args) == 2 and args[0] == 'orient':
                (eid,) = _ints(args[1:], lineno)
                events.append(UpdateEvent.query_orientation(eid))
            else:
                raise ParseError("query must be '? density' or '? orient id'", line=lineno)
        else:
            raise ParseError(f"unknown operation {op!r}", line=lineno)
    return events


def format_update_stream(events):
    """Inverse of parse_update_stream (ids always written explicitly)"""
    lines = []
    for ev in events:
        if ev.kind == INSERT:
            if ev.edge_id is None:
                lines.append(f"+ {ev.u} {ev.v}")
            else:
                lines.append(f"+ {ev.edge_id} {ev.u} {ev.v}")
        elif ev.kind == DELETE:
            lines.append(f"- {ev.edge_id}")
        elif ev.kind == QUERY_DENSITY:
            lines.append("? density")
        else:
            lines.append(f"? orient {ev.edge_id}")
    return "\n".join(lines) + "\n"


def replay(n, events):
    """Apply every update event of a stream to a fresh n-vertex graph"""
    g = Graph(n)
    for ev in events:
        if ev.is_update:
            apply_update(g, ev)
    return g


def stream_vertex_count(events):
    """Smallest n that covers every endpoint mentioned in the stream"""
    top = -1
    for ev in events:
        if ev.kind == INSERT:
            top = max(top, ev.u, ev.v)
    return top + 1

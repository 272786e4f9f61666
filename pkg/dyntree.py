"""
Dynamic Trees
Forest of weighted edges supporting link, cut, tree identity, path maximum,
tree minimum, tree size and one payload slot per tree.

Two structures back every DynForest:

* a splay-based link-cut tree in which each edge is its own node, carrying the
  maximum edge key of each splay subtree (path maximum);
* an Euler-tour sequence kept in a randomized treap, carrying per-tree
  aggregates: vertex count, minimum edge key, smallest vertex and payload.

Both are amortized / expected O(log n) per operation.
"""

import random

from errors import NotConnected, SameNode, UnknownEdge, VertexOutOfRange, WouldCreateCycle


# ---------------------------------------------------------------------------
# Link-cut tree (path aggregates)
# ---------------------------------------------------------------------------

class _SplayNode:
    __slots__ = ('left', 'right', 'parent', 'rev', 'key', 'handle', 'best')

    def __init__(self, key=None, handle=None):
        self.left = None
        self.right = None
        self.parent = None
        self.rev = False
        self.key = key
        self.handle = handle
        self.best = self if key is not None else None


def _is_splay_root(x):
    p = x.parent
    return p is None or (p.left is not x and p.right is not x)


def _push(x):
    if x.rev:
        x.left, x.right = x.right, x.left
        if x.left is not None:
            x.left.rev = not x.left.rev
        if x.right is not None:
            x.right.rev = not x.right.rev
        x.rev = False


def _pull(x):
    best = x if x.key is not None else None
    for c in (x.left, x.right):
        if c is not None and c.best is not None:
            if best is None or c.best.key > best.key:
                best = c.best
    x.best = best


class LinkCutTree:
    """Rooted-forest representation; the caller keeps it acyclic"""

    def __init__(self):
        self.work = 0

    def _rotate(self, x):
        p = x.parent
        g = p.parent
        if not _is_splay_root(p):
            if g.left is p:
                g.left = x
            else:
                g.right = x
        x.parent = g
        if p.left is x:
            p.left = x.right
            if p.left is not None:
                p.left.parent = p
            x.right = p
        else:
            p.right = x.left
            if p.right is not None:
                p.right.parent = p
            x.left = p
        p.parent = x
        _pull(p)
        _pull(x)
        self.work += 1

    def splay(self, x):
        stack = [x]
        y = x
        while not _is_splay_root(y):
            y = y.parent
            stack.append(y)
        for node in reversed(stack):
            _push(node)
        while not _is_splay_root(x):
            p = x.parent
            if not _is_splay_root(p):
                g = p.parent
                if (g.left is p) == (p.left is x):
                    self._rotate(p)
                else:
                    self._rotate(x)
            self._rotate(x)

    def access(self, x):
        last = None
        y = x
        while y is not None:
            self.splay(y)
            y.right = last
            _pull(y)
            last = y
            y = y.parent
            self.work += 1
        self.splay(x)

    def make_root(self, x):
        self.access(x)
        x.rev = not x.rev
        _push(x)

    def link(self, child, parent):
        self.make_root(child)
        child.parent = parent

    def cut(self, u, v):
        """Remove the tree edge between adjacent nodes u and v"""
        self.make_root(u)
        self.access(v)
        left = v.left
        if left is not u or u.right is not None:
            # callers only cut adjacent pairs
            raise UnknownEdge("nodes are not adjacent")
        left.parent = None
        v.left = None
        _pull(v)

    def path_best(self, u, v):
        """Node with the maximum key on the u..v path"""
        self.make_root(u)
        self.access(v)
        return v.best

    def on_path(self, a, b, x):
        """True if node x lies on the a..b path"""
        self.make_root(a)
        self.access(b)
        self.splay(x)
        # after access(b) the only path without a path-parent is a..b
        return x.parent is None


# ---------------------------------------------------------------------------
# Euler-tour treap (tree aggregates)
# ---------------------------------------------------------------------------

class _TourNode:
    __slots__ = ('left', 'right', 'parent', 'prio', 'vertex', 'key', 'handle',
                 'has_payload', 'payload', 'size', 'vcount', 'emin', 'vmin', 'paycount')

    def __init__(self, prio, vertex=None, key=None, handle=None):
        self.left = None
        self.right = None
        self.parent = None
        self.prio = prio
        self.vertex = vertex
        self.key = key
        self.handle = handle
        self.has_payload = False
        self.payload = None
        self.size = 1
        self.vcount = 1 if vertex is not None else 0
        self.emin = self if key is not None else None
        self.vmin = vertex
        self.paycount = 0


def _update(x):
    size = 1
    vcount = 1 if x.vertex is not None else 0
    emin = x if x.key is not None else None
    vmin = x.vertex
    paycount = 1 if x.has_payload else 0
    for c in (x.left, x.right):
        if c is None:
            continue
        size += c.size
        vcount += c.vcount
        if c.emin is not None and (emin is None or c.emin.key < emin.key):
            emin = c.emin
        if c.vmin is not None and (vmin is None or c.vmin < vmin):
            vmin = c.vmin
        paycount += c.paycount
    x.size = size
    x.vcount = vcount
    x.emin = emin
    x.vmin = vmin
    x.paycount = paycount


class EulerTourTreap:
    """Sequences of tour nodes, one sequence per tree"""

    def __init__(self):
        self.work = 0

    def merge(self, a, b):
        self.work += 1
        if a is None:
            return b
        if b is None:
            return a
        if a.prio > b.prio:
            a.right = self.merge(a.right, b)
            a.right.parent = a
            _update(a)
            return a
        b.left = self.merge(a, b.left)
        b.left.parent = b
        _update(b)
        return b

    def _split(self, t, k):
        self.work += 1
        if t is None:
            return None, None
        left_size = t.left.size if t.left is not None else 0
        if k <= left_size:
            lo, hi = self._split(t.left, k)
            t.left = hi
            if hi is not None:
                hi.parent = t
            _update(t)
            return lo, t
        lo, hi = self._split(t.right, k - left_size - 1)
        t.right = lo
        if lo is not None:
            lo.parent = t
        _update(t)
        return t, hi

    def split(self, t, k):
        """First k nodes of t, and the rest"""
        lo, hi = self._split(t, k)
        if lo is not None:
            lo.parent = None
        if hi is not None:
            hi.parent = None
        return lo, hi

    def join(self, *parts):
        root = None
        for part in parts:
            root = self.merge(root, part)
        if root is not None:
            root.parent = None
        return root

    def root(self, x):
        while x.parent is not None:
            x = x.parent
            self.work += 1
        return x

    def index(self, x):
        i = x.left.size if x.left is not None else 0
        while x.parent is not None:
            p = x.parent
            if p.right is x:
                i += (p.left.size if p.left is not None else 0) + 1
            x = p
            self.work += 1
        return i

    def reroot(self, x):
        """Rotate x's tour so that it starts at x"""
        r = self.root(x)
        i = self.index(x)
        if i == 0:
            return r
        head, tail = self.split(r, i)
        return self.join(tail, head)

    def refresh(self, x):
        while x is not None:
            _update(x)
            x = x.parent


# ---------------------------------------------------------------------------
# Public forest
# ---------------------------------------------------------------------------

class _EdgeRecord:
    __slots__ = ('u', 'v', 'key', 'node', 'arc_uv', 'arc_vu')

    def __init__(self, u, v, key, node, arc_uv, arc_vu):
        self.u = u
        self.v = v
        self.key = key
        self.node = node
        self.arc_uv = arc_uv
        self.arc_vu = arc_vu


class DynForest:
    """
    Dynamic forest on nodes 0..n-1 with totally ordered edge keys

    Keys must be mutually comparable; callers use (weight, edge id) tuples so
    every comparison is strict.
    """

    def __init__(self, n, seed=0):
        self.n = n
        self._rng = random.Random(seed)
        self._lct = LinkCutTree()
        self._ett = EulerTourTreap()
        self._vsplay = [_SplayNode() for _ in range(n)]
        self._vtour = [_TourNode(self._rng.random(), vertex=v) for v in range(n)]
        self._edges = {}
        self._next_handle = 0

    @property
    def work(self):
        """Elementary steps taken so far (rotations, treap visits)"""
        return self._lct.work + self._ett.work

    def _check(self, v):
        if not 0 <= v < self.n:
            raise VertexOutOfRange(f"Node {v} outside 0..{self.n - 1}")

    def _record(self, handle):
        try:
            return self._edges[handle]
        except KeyError:
            raise UnknownEdge(f"Unknown edge handle: {handle}") from None

    def __contains__(self, handle):
        return handle in self._edges

    def __len__(self):
        return len(self._edges)

    def edges(self):
        return list(self._edges)

    def key(self, handle):
        return self._record(handle).key

    def endpoints(self, handle):
        rec = self._record(handle)
        return rec.u, rec.v

    def connected(self, u, v):
        self._check(u)
        self._check(v)
        return self._ett.root(self._vtour[u]) is self._ett.root(self._vtour[v])

    def link(self, u, v, key, handle=None):
        """
        Join the trees of u and v with a new edge

        Args:
            u, v: nodes in distinct trees
            key: comparable weight key of the edge
            handle: edge handle to use (fresh integer if None)

        Returns:
            the edge handle
        """
        self._check(u)
        self._check(v)
        if u == v or self.connected(u, v):
            raise WouldCreateCycle(f"Nodes {u} and {v} are already connected")
        if handle is None:
            while self._next_handle in self._edges:
                self._next_handle += 1
            handle = self._next_handle
            self._next_handle += 1
        elif handle in self._edges:
            raise ValueError(f"Edge handle {handle} is already linked")

        node = _SplayNode(key, handle)
        self._lct.link(node, self._vsplay[v])
        self._lct.link(self._vsplay[u], node)

        arc_uv = _TourNode(self._rng.random(), key=key, handle=handle)
        arc_vu = _TourNode(self._rng.random(), key=key, handle=handle)
        tour_u = self._ett.reroot(self._vtour[u])
        tour_v = self._ett.reroot(self._vtour[v])
        self._ett.join(tour_u, arc_uv, tour_v, arc_vu)

        self._edges[handle] = _EdgeRecord(u, v, key, node, arc_uv, arc_vu)
        return handle

    def cut(self, handle):
        """Remove an edge, splitting its tree in two"""
        rec = self._record(handle)
        self._lct.cut(self._vsplay[rec.u], rec.node)
        self._lct.cut(rec.node, self._vsplay[rec.v])

        ett = self._ett
        root = ett.root(rec.arc_uv)
        i = ett.index(rec.arc_uv)
        j = ett.index(rec.arc_vu)
        if i > j:
            i, j = j, i
        head, rest = ett.split(root, i)
        _, rest = ett.split(rest, 1)
        middle, rest = ett.split(rest, j - i - 1)
        _, tail = ett.split(rest, 1)
        ett.join(head, tail)
        del self._edges[handle]

    def tree_id(self, v):
        """Handle of the tree's minimum-key edge, or -(v+1) for a singleton"""
        self._check(v)
        root = self._ett.root(self._vtour[v])
        if root.emin is None:
            return -(v + 1)
        return root.emin.handle

    def tree_size(self, v):
        self._check(v)
        return self._ett.root(self._vtour[v]).vcount

    def tree_vertex_min(self, v):
        """Smallest node id in v's tree"""
        self._check(v)
        return self._ett.root(self._vtour[v]).vmin

    def tree_min(self, v):
        """Handle of the minimum-key edge in v's tree, None for a singleton"""
        self._check(v)
        emin = self._ett.root(self._vtour[v]).emin
        return None if emin is None else emin.handle

    def path_max(self, u, v):
        """Handle of the maximum-key edge on the u..v path"""
        self._check(u)
        self._check(v)
        if u == v:
            raise SameNode(f"path_max needs two distinct nodes, got {u} twice")
        if not self.connected(u, v):
            raise NotConnected(f"Nodes {u} and {v} are in different trees")
        return self._lct.path_best(self._vsplay[u], self._vsplay[v]).handle

    def on_path(self, a, b, handle):
        """True if the edge lies on the a..b path (a, b connected)"""
        rec = self._record(handle)
        if a == b:
            return False
        return self._lct.on_path(self._vsplay[a], self._vsplay[b], rec.node)

    # payload --------------------------------------------------------------

    def _payload_node(self, v):
        x = self._ett.root(self._vtour[v])
        if x.paycount == 0:
            return None
        while True:
            if x.left is not None and x.left.paycount:
                x = x.left
            elif x.has_payload:
                return x
            else:
                x = x.right

    def payload(self, v):
        """(anchor node, value) of the payload in v's tree, or None"""
        self._check(v)
        node = self._payload_node(v)
        if node is None:
            return None
        return node.vertex, node.payload

    def clear_payload(self, v):
        self._check(v)
        node = self._payload_node(v)
        if node is not None:
            node.has_payload = False
            node.payload = None
            self._ett.refresh(node)

    def set_payload(self, v, value):
        """Attach value to v's tree, anchored at v (replaces any old payload)"""
        self.clear_payload(v)
        node = self._vtour[v]
        node.has_payload = True
        node.payload = value
        self._ett.refresh(node)

    def payload_count(self, v):
        """Number of payloads in v's tree (more than one only after a bad link)"""
        self._check(v)
        return self._ett.root(self._vtour[v]).paycount

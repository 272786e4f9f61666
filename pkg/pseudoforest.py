"""
Dynamic Pseudoforest
Minimum-weight maximal pseudoforest of a dynamic multigraph under edge
insertion, deletion and reweighting, with per-edge orientation queries.

Every pseudoforest component C is stored as the tree T_C = C - e_C in a
DynForest D; the special cycle edge e_C (absent for acyclic components) is
kept as D's per-tree payload. A second DynForest D' holds the same trees plus
a pendant edge (v, v') for every vertex v, keyed by the cheapest non-member
edge incident to v, so that tree_min over a D' tree finds the best candidate
edge touching that component.
"""

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from numbers import Real
from typing import NamedTuple, Optional

from dyntree import DynForest
from errors import (
    AcyclicComponent,
    DuplicateEdgeId,
    InternalConsistencyError,
    NotInPseudoforest,
    UnknownEdgeId,
    VertexOutOfRange,
)


class CycleEdge(NamedTuple):
    """Special edge of a cyclic component, oriented tail -> head"""
    edge_id: int
    tail: int
    head: int


@dataclass(frozen=True)
class Swap:
    """Net membership change: `out` left P (or None), `into` joined P (or None)"""
    out: Optional[int]
    into: Optional[int]


@dataclass(frozen=True)
class Replacement:
    into: int


class Orientation(NamedTuple):
    edge_id: int
    tail: int
    head: int


class PseudoforestSummary(NamedTuple):
    is_forest: bool
    largest_component: int
    total_weight: object


def _pendant(v):
    return ('pendant', v)


class DynamicPseudoforest:
    """
    Minimum-weight maximal pseudoforest P of a dynamic graph on n vertices

    Edge keys are (weight, edge id), compared lexicographically, so the
    minimum-weight maximal pseudoforest is unique.
    """

    def __init__(self, n, seed=0):
        self.n = n
        self.tree = DynForest(n, seed=seed)
        self.aug = DynForest(2 * n, seed=seed + 1)
        self.endpoints = {}
        self.weight = {}
        self.members = set()
        self._candidates = {}
        self._queues = [[] for _ in range(n)]
        self._pendant_key = [self._empty_key(v) for v in range(n)]
        for v in range(n):
            self.aug.link(v, n + v, self._pendant_key[v], handle=_pendant(v))
        self._sizes = Counter({1: n}) if n else Counter()
        self._cyclic = 0
        self._total = 0

    # ------------------------------------------------------------------
    # keys and queues
    # ------------------------------------------------------------------

    @staticmethod
    def _empty_key(v):
        return (math.inf, -(v + 1))

    def key(self, e):
        return (self.weight[e], e)

    def _queue_push(self, e):
        key = self.key(e)
        self._candidates[e] = key
        u, v = self.endpoints[e]
        for x in {u, v}:
            heapq.heappush(self._queues[x], (key, e))
            if key < self._pendant_key[x]:
                self._relink_pendant(x, key)

    def _queue_remove(self, e):
        key = self._candidates.pop(e)
        u, v = self.endpoints[e]
        for x in {u, v}:
            if self._pendant_key[x] == key:
                self._relink_pendant(x, self._queue_top(x))

    def _queue_top(self, x):
        heap = self._queues[x]
        while heap:
            key, e = heap[0]
            if self._candidates.get(e) == key:
                return key
            heapq.heappop(heap)
        return self._empty_key(x)

    def _relink_pendant(self, x, key):
        self.aug.cut(_pendant(x))
        self.aug.link(x, self.n + x, key, handle=_pendant(x))
        self._pendant_key[x] = key

    # ------------------------------------------------------------------
    # component bookkeeping
    # ------------------------------------------------------------------

    def cycle_edge(self, v):
        """CycleEdge of v's component, or None if the component is acyclic"""
        found = self.tree.payload(v)
        return None if found is None else found[1]

    def _set_cycle(self, e):
        u, v = self.endpoints[e]
        tail, head = (u, v) if u <= v else (v, u)
        # anchored at the tail so _detach can find it after cutting the cycle
        self.tree.set_payload(tail, CycleEdge(e, tail, head))
        self._cyclic += 1

    def _clear_cycle(self, v):
        self.tree.clear_payload(v)
        self._cyclic -= 1

    def _link(self, e):
        u, v = self.endpoints[e]
        su, sv = self.tree.tree_size(u), self.tree.tree_size(v)
        if self.tree.payload_count(u) and self.tree.payload_count(v):
            raise InternalConsistencyError(f"Edge {e} would join two cyclic components")
        self.tree.link(u, v, self.key(e), handle=e)
        self.aug.link(u, v, (math.inf, e), handle=e)
        self._sizes[su] -= 1
        self._sizes[sv] -= 1
        self._sizes[su + sv] += 1

    def _cut(self, e):
        u, v = self.endpoints[e]
        size = self.tree.tree_size(u)
        self.tree.cut(e)
        self.aug.cut(e)
        self._sizes[size] -= 1
        self._sizes[self.tree.tree_size(u)] += 1
        self._sizes[self.tree.tree_size(v)] += 1

    def _on_cycle(self, e, cyc):
        """True if tree edge e lies on the cycle closed by cyc"""
        if cyc.tail == cyc.head:
            return False
        return self.tree.on_path(cyc.tail, cyc.head, e)

    def _attach(self, e):
        """Add e to P; P + e must be a pseudoforest"""
        u, v = self.endpoints[e]
        if u != v and not self.tree.connected(u, v):
            self._link(e)
        else:
            if self.cycle_edge(u) is not None:
                raise InternalConsistencyError(f"Edge {e} would close a second cycle")
            self._set_cycle(e)
        self.members.add(e)
        self._total += self.weight[e]

    def _detach(self, e):
        """Remove e from P, restructuring e_C when e was on the cycle"""
        u, v = self.endpoints[e]
        cyc = self.cycle_edge(u)
        if cyc is not None and cyc.edge_id == e:
            self._clear_cycle(u)
        elif cyc is not None and self._on_cycle(e, cyc):
            self._cut(e)
            self._clear_cycle(cyc.tail)
            self._link(cyc.edge_id)
        else:
            self._cut(e)
        self.members.discard(e)
        self._total -= self.weight[e]

    def _independent_with(self, u, v):
        """True if P + (u, v) is still a pseudoforest"""
        if u == v or self.tree.connected(u, v):
            return self.cycle_edge(u) is None
        return self.cycle_edge(u) is None or self.cycle_edge(v) is None

    def _circuit_max(self, u, v):
        """Maximum-key member of the unique circuit in P + (u, v)"""
        best = []
        cyc_u = self.cycle_edge(u)
        if u == v or self.tree.connected(u, v):
            a, b = cyc_u.tail, cyc_u.head
            for x, y in ((u, v), (a, b), (u, a)):
                if x != y:
                    best.append(self.tree.path_max(x, y))
            best.append(cyc_u.edge_id)
        else:
            for w, cyc in ((u, cyc_u), (v, self.cycle_edge(v))):
                a, b = cyc.tail, cyc.head
                for x, y in ((a, b), (w, a)):
                    if x != y:
                        best.append(self.tree.path_max(x, y))
                best.append(cyc.edge_id)
        return max(best, key=self.key)

    # ------------------------------------------------------------------
    # updates
    # ------------------------------------------------------------------

    def _register(self, e, u, v, w):
        if e in self.endpoints:
            raise DuplicateEdgeId(f"Edge id {e} is already present")
        for x in (u, v):
            if not 0 <= x < self.n:
                raise VertexOutOfRange(f"Vertex {x} outside 0..{self.n - 1}")
        if not isinstance(w, Real) or math.isinf(w) or math.isnan(w):
            raise ValueError(f"Edge weight must be a finite number: {w!r}")
        self.endpoints[e] = (u, v)
        self.weight[e] = w

    def pf_insert(self, e, u, v, w):
        """
        Insert edge e = (u, v) with weight w

        Returns:
            None if e only became a candidate, Swap(out=None, into=e) if it
            joined P directly, Swap(out=f, into=e) if it replaced f.
        """
        self._register(e, u, v, w)
        if self._independent_with(u, v):
            self._attach(e)
            return Swap(out=None, into=e)

        f = self._circuit_max(u, v)
        if self.key(e) < self.key(f):
            self._detach(f)
            self._queue_push(f)
            self._attach(e)
            return Swap(out=f, into=e)
        self._queue_push(e)
        return None

    def pf_delete(self, e):
        """
        Delete edge e

        Returns:
            Replacement(into=f) if a candidate f took e's place, else None
        """
        if e not in self.endpoints:
            raise UnknownEdgeId(f"Unknown edge id: {e}")
        if e not in self.members:
            self._queue_remove(e)
            self._unregister(e)
            return None

        u, v = self.endpoints[e]
        cyc = self.cycle_edge(u)
        whole = cyc is not None and (cyc.edge_id == e or self._on_cycle(e, cyc))
        self._detach(e)
        self._unregister(e)

        if whole:
            side = u
        elif cyc is not None:
            side = u if self.cycle_edge(u) is None else v
        else:
            # both halves acyclic, so maximality leaves them no candidates
            for x in (u, v):
                if self._best_candidate(x) is not None:
                    raise InternalConsistencyError(
                        f"Acyclic component at vertex {x} has a candidate edge")
            return None

        f = self._best_candidate(side)
        if f is None:
            return None
        self._queue_remove(f)
        self._attach(f)
        return Replacement(into=f)

    def _best_candidate(self, v):
        handle = self.aug.tree_min(v)
        if handle is None:
            return None
        weight, ident = self.aug.key(handle)
        if math.isinf(weight):
            return None
        return ident

    def _unregister(self, e):
        del self.endpoints[e]
        del self.weight[e]

    def pf_reweight(self, e, new_w):
        """
        Change the weight of e (delete then re-insert under the same id)

        Returns:
            the net membership change as a single Swap, or None
        """
        if e not in self.endpoints:
            raise UnknownEdgeId(f"Unknown edge id: {e}")
        u, v = self.endpoints[e]
        was_member = e in self.members
        rep = self.pf_delete(e)
        swap = self.pf_insert(e, u, v, new_w)
        entered = swap is not None
        out = swap.out if swap is not None else None

        if was_member:
            r = rep.into if rep is not None else None
            if entered:
                if out is None or out == r:
                    return None
                return Swap(out=out, into=r)
            return Swap(out=e, into=r)
        if entered:
            return Swap(out=out, into=e)
        return None

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    def pf_orient(self, e, strict=False):
        """
        Direction of member edge e in the canonical orientation of P

        Cycles follow e_C's stored direction, other edges point toward the
        cycle. Acyclic components point toward their smallest vertex unless
        strict is set, in which case AcyclicComponent is raised.
        """
        if e not in self.endpoints:
            raise UnknownEdgeId(f"Unknown edge id: {e}")
        if e not in self.members:
            raise NotInPseudoforest(f"Edge {e} is not in the pseudoforest")
        x, y = self.endpoints[e]
        cyc = self.cycle_edge(x)
        if cyc is None:
            if strict:
                raise AcyclicComponent(f"Edge {e} lies in an acyclic component")
            root = self.tree.tree_vertex_min(x)
            if self.tree.on_path(x, root, e):
                return Orientation(e, x, y)
            return Orientation(e, y, x)
        if cyc.edge_id == e:
            return Orientation(e, cyc.tail, cyc.head)
        if self._on_cycle(e, cyc):
            # the cycle runs tail -> head over e_C, then head back to tail
            if self.tree.on_path(cyc.head, x, e):
                return Orientation(e, y, x)
            return Orientation(e, x, y)
        if self.tree.on_path(x, cyc.tail, e):
            return Orientation(e, x, y)
        return Orientation(e, y, x)

    def pf_summary(self):
        largest = max((s for s, c in self._sizes.items() if c > 0), default=0)
        return PseudoforestSummary(self._cyclic == 0, largest, self._total)

    def is_member(self, e):
        return e in self.members

    def candidates(self):
        return set(self._candidates)

    def total_key_weight(self):
        return self._total

    def check_invariants(self):
        """Assert maximality and pendant/queue coherence; raises on failure"""
        for f in self._candidates:
            for x in self.endpoints[f]:
                if self.cycle_edge(x) is None:
                    raise InternalConsistencyError(
                        f"Candidate {f} touches acyclic component at {x}")
        for x in range(self.n):
            if self.aug.key(_pendant(x)) != self._queue_top(x):
                raise InternalConsistencyError(f"Pendant key of {x} out of date")
            if self.tree.payload_count(x) > 1:
                raise InternalConsistencyError(f"Two cycle edges in component of {x}")
        if self.members & set(self._candidates):
            raise InternalConsistencyError("Edge both member and candidate")
        return True

"""
Layered Pseudoforest Packing
Maintains a greedy packing of k minimum-weight maximal pseudoforests of a
dynamic graph. Layer i weighs every edge by the number of earlier layers
containing it, so after every update layer i equals the i-th base of the
static greedy packing (same (count, edge id) tie-break).
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List
import math

import pandas as pd

from errors import EmptyActiveSet, InternalConsistencyError, UnknownEdgeId
from graph_core import Graph
from pseudoforest import DynamicPseudoforest, Swap


class CountIndex:
    """Buckets of active edges by membership count, with O(1) amortized minimum"""

    def __init__(self):
        self._buckets = defaultdict(set)
        self._count = {}
        self._min = None

    def __len__(self):
        return len(self._count)

    def __contains__(self, e):
        return e in self._count

    def add(self, e, count):
        self._count[e] = count
        self._buckets[count].add(e)
        if self._min is None or count < self._min:
            self._min = count

    def remove(self, e):
        count = self._count.pop(e)
        bucket = self._buckets[count]
        bucket.discard(e)
        if not bucket:
            del self._buckets[count]
            if count == self._min:
                self._advance()

    def move(self, e, count):
        self.remove(e)
        self.add(e, count)

    def _advance(self):
        if not self._count:
            self._min = None
            return
        while self._min not in self._buckets:
            self._min += 1

    def minimum(self):
        """(count, smallest edge id with that count)"""
        if self._min is None:
            raise EmptyActiveSet("No active edges")
        return self._min, min(self._buckets[self._min])

    def scan_minimum(self):
        """Same as minimum() by linear scan (for audits)"""
        if not self._count:
            raise EmptyActiveSet("No active edges")
        low = min(self._count.values())
        return low, min(e for e, c in self._count.items() if c == low)


@dataclass
class RecourseReport:
    update_index: int
    op: str
    edge_id: int
    per_layer_swaps: List[int] = field(default_factory=list)

    @property
    def swaps(self):
        return sum(self.per_layer_swaps)


class LayeredPacking:
    """k stacked dynamic pseudoforests under cascade repair"""

    def __init__(self, n, k, prune=None, edge_cap=None, seed=0):
        """
        Args:
            n: vertex count
            k: number of layers (fixed for the lifetime of the packing)
            prune: PruneConfig or None for plain greedy packing
            edge_cap: m used in the pruning start threshold (current m if None)
            seed: seed for the dynamic tree treaps
        """
        if k < 1:
            raise ValueError(f"Need at least one layer, got k={k}")
        self.n = n
        self.prune = prune
        self.edge_cap = edge_cap
        self.seed = seed
        self.graph = Graph(n)
        self.layers = [DynamicPseudoforest(n, seed=seed + 2 * i) for i in range(k)]
        self.counts = {}
        self.cutoff = {}
        self.index = CountIndex()
        self.recourse_log = []
        self._updates = 0

    @property
    def k(self):
        return len(self.layers)

    def is_active(self, e):
        return self.cutoff.get(e, 0) is None

    def active_edges(self):
        return sorted(e for e, c in self.cutoff.items() if c is None)

    def _prune_start(self):
        m = self.edge_cap if self.edge_cap is not None else max(self.graph.m, 1)
        return self.prune.start(m)

    def _bump(self, e, step):
        self.counts[e] += step
        if e in self.index:
            self.index.move(e, self.counts[e])

    def _deactivate(self, e, after):
        self.cutoff[e] = after
        if e in self.index:
            self.index.remove(e)

    def _present(self, e, i):
        cut = self.cutoff.get(e)
        return cut is None or i < cut

    # ------------------------------------------------------------------

    def lp_insert(self, u, v, edge_id=None):
        """
        Insert edge (u, v) into every layer and repair the cascade

        Returns:
            RecourseReport
        """
        e = self.graph.add_edge(u, v, edge_id=edge_id)
        self.counts[e] = 0
        self.cutoff[e] = None
        self.index.add(e, 0)
        return self._log(self._cascade('insert', e, u, v))

    def lp_delete(self, e):
        """Delete edge e from every layer and repair the cascade"""
        if not self.graph.has_edge(e):
            raise UnknownEdgeId(f"Unknown edge id: {e}")
        u, v = self.graph.remove_edge(e)
        report = self._cascade('delete', e, u, v)
        if e in self.index:
            self.index.remove(e)
        del self.counts[e]
        del self.cutoff[e]
        return self._log(report)

    def _log(self, report):
        self.recourse_log.append(report)
        self._updates += 1
        return report

    def _cascade(self, op, e, u, v):
        report = RecourseReport(self._updates, op, e)
        delta = {}
        own = 0
        pending = set()
        start = self._prune_start() if self.prune is not None else None

        for i, layer in enumerate(self.layers):
            changes = []
            if op == 'insert':
                if self._present(e, i):
                    changes.append(layer.pf_insert(e, u, v, own))
            elif e in layer.endpoints:
                changes.append(self._remove_from(layer, e))
            for f in sorted(pending):
                if f in layer.endpoints:
                    changes.append(self._remove_from(layer, f))
            for f in sorted(delta):
                if delta[f] and f in layer.endpoints:
                    changes.append(layer.pf_reweight(f, layer.weight[f] + delta[f]))

            swaps = 0
            for change in changes:
                if change is None or (change.out is None and change.into is None):
                    continue
                swaps += 1
                for f, step in ((change.into, 1), (change.out, -1)):
                    if f is None:
                        continue
                    self._bump(f, step)
                    if op == 'insert' and f == e:
                        own += step
                    else:
                        delta[f] = delta.get(f, 0) + step
            report.per_layer_swaps.append(swaps)

            if start is not None and i + 1 >= start:
                touched = [f for f, d in delta.items() if d]
                if op == 'insert':
                    touched.append(e)
                self._prune_after(i + 1, touched, delta, own, e, pending)
        return report

    def _remove_from(self, layer, f):
        was_member = f in layer.members
        rep = layer.pf_delete(f)
        into = rep.into if rep is not None else None
        return Swap(out=f if was_member else None, into=into)

    def _prune_after(self, j, touched, delta, own, inserted, pending):
        """Apply the prune rule to changed edges once j layers are settled"""
        for f in sorted(set(touched)):
            if not self.graph.has_edge(f) or not self._present(f, j - 1):
                continue
            if self.cutoff[f] is not None:
                continue
            if f == inserted:
                count = own
            elif j < self.k and f in self.layers[j].endpoints:
                count = self.layers[j].weight[f] + delta.get(f, 0)
            else:
                count = self.counts[f]
            m = self.edge_cap if self.edge_cap is not None else max(self.graph.m, 1)
            if self.prune.should_prune(count, j, m):
                self._deactivate(f, j)
                delta.pop(f, None)
                if j < self.k:
                    pending.add(f)

    # ------------------------------------------------------------------

    def lp_min_count(self):
        """(minimum membership count over active edges, witnessing edge)"""
        return self.index.minimum()

    def estimate(self):
        """k / min count, or math.inf when some active edge is uncovered"""
        count, _ = self.lp_min_count()
        if count == 0:
            return math.inf
        return Fraction(self.k, count)

    def layer_members(self, i):
        return sorted(self.layers[i].members)

    def layers_containing(self, e):
        return [i for i, layer in enumerate(self.layers) if e in layer.members]

    def max_membership(self, active_only=True):
        ids = self.active_edges() if active_only else list(self.counts)
        return max((self.counts[e] for e in ids), default=0)

    def appearance_bound(self):
        """
        Largest membership count an active edge can reach under the prune rule:
        at most `start` layers before pruning can fire, and afterwards the count
        stays within c_load/rho_minus of the layer index.
        """
        if self.prune is None:
            return self.k
        start = self._prune_start()
        late = math.floor(self.prune.c_load * (self.k - 1) / self.prune.rho_minus) + 1
        return min(self.k, max(start, late))

    def rebuild(self):
        """Recreate every layer from the current edge set (no recourse logged)"""
        edges = [(e, *self.graph.edges[e]) for e in self.graph.edge_ids()]
        self.layers = [DynamicPseudoforest(self.n, seed=self.seed + 2 * i)
                       for i in range(self.k)]
        self.counts = {}
        self.cutoff = {}
        self.index = CountIndex()
        for e, u, v in edges:
            self.counts[e] = 0
            self.cutoff[e] = None
            self.index.add(e, 0)
            self._cascade('insert', e, u, v)

    def recourse_frame(self):
        return pd.DataFrame({
            'update_index': [r.update_index for r in self.recourse_log],
            'op': [r.op for r in self.recourse_log],
            'swaps': [r.swaps for r in self.recourse_log],
            'per_layer_swaps': [';'.join(map(str, r.per_layer_swaps)) for r in self.recourse_log],
        })

    def export_recourse_csv(self, filepath):
        self.recourse_frame().to_csv(filepath, index=False)
        return filepath

    def check_invariants(self):
        """Counts match layer memberships and the index matches a scan"""
        for e in self.counts:
            if self.counts[e] != len(self.layers_containing(e)):
                raise InternalConsistencyError(f"Count of edge {e} out of sync")
        if len(self.index) and self.index.minimum() != self.index.scan_minimum():
            raise InternalConsistencyError("Count index disagrees with a linear scan")
        return True

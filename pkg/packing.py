"""
Greedy Base Packing
Static greedy packing of bases in the graphic and bicircular matroids of a
multigraph, with optional pruning, producing per-edge loads x^k = c/k.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Optional, Set

import joblib
import numpy as np
import pandas as pd

from errors import EmptyActiveSet, EmptyGraph


GRAPHIC = 'graphic'
BICIRCULAR = 'bicircular'
KINDS = (GRAPHIC, BICIRCULAR)


def check_kind(kind):
    if kind not in KINDS:
        raise ValueError(f"Unknown matroid kind: {kind}")
    return kind


class Components:
    """
    Union-find over vertices acting as the independence oracle

    graphic: an edge is accepted if it joins two components.
    bicircular: an edge is accepted unless both of its components (or its
    single component) already carry a cycle.
    """

    def __init__(self, n, kind):
        self.kind = check_kind(kind)
        self.parent = list(range(n))
        self.cyclic = [False] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def accepts(self, u, v):
        ru, rv = self.find(u), self.find(v)
        if self.kind == GRAPHIC:
            return ru != rv
        if ru == rv:
            return not self.cyclic[ru]
        return not (self.cyclic[ru] and self.cyclic[rv])

    def add(self, u, v):
        """Add edge (u, v) if independent; returns whether it was added"""
        if not self.accepts(u, v):
            return False
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            self.cyclic[ru] = True
        else:
            self.parent[ru] = rv
            self.cyclic[rv] = self.cyclic[rv] or self.cyclic[ru]
        return True


def greedy_base(g, key, kind, edges=None, preload=()):
    """
    Greedy independent set over `edges` in increasing `key` order

    Args:
        g: Graph
        key: callable edge id -> sort key (must be total)
        kind: 'graphic' or 'bicircular'
        edges: candidate edge ids (all edges if None)
        preload: edge ids added first without being reported (contraction)

    Returns:
        list of selected edge ids in selection order
    """
    comps = Components(g.n, kind)
    for e in preload:
        comps.add(*g.edges[e])
    chosen = []
    pool = g.edge_ids() if edges is None else edges
    for e in sorted(pool, key=key):
        u, v = g.edges[e]
        if comps.add(u, v):
            chosen.append(e)
    return chosen


def min_weight_base(g, weights, kind, edges=None):
    """
    Minimum-weight base under (weight, edge id) keys

    Args:
        g: Graph
        weights: mapping edge id -> numeric weight
        kind: 'graphic' or 'bicircular'
        edges: restrict the ground set to these edge ids

    Returns:
        sorted list of edge ids of the base
    """
    check_kind(kind)
    return sorted(greedy_base(g, lambda e: (weights[e], e), kind, edges))


def rank(g, kind, edges=None):
    return len(greedy_base(g, lambda e: e, kind, edges))


def is_independent(g, kind, edges):
    comps = Components(g.n, kind)
    return all(comps.add(*g.edges[e]) for e in edges)


def is_base(g, kind, edges, ground=None):
    """True if `edges` is a base of the matroid restricted to `ground`"""
    edges = list(edges)
    return is_independent(g, kind, edges) and len(edges) == rank(g, kind, ground)


@dataclass(frozen=True)
class PruneConfig:
    """Pruning interval [rho_minus, rho_plus] and rule constants"""
    rho_minus: float
    rho_plus: float
    c_prune: float = 24
    c_load: float = 2

    def __post_init__(self):
        if not 0 < self.rho_minus <= self.rho_plus:
            raise ValueError(
                f"Need 0 < rho_minus <= rho_plus, got [{self.rho_minus}, {self.rho_plus}]")

    def start(self, m):
        """First k at which pruning may fire"""
        if m <= 1:
            return 0
        return math.ceil(self.c_prune * self.rho_plus * math.log(m))

    def should_prune(self, count, k, m):
        """Rule: x_e = count/k > c_load/rho_minus once k >= start(m)"""
        if k < self.start(m):
            return False
        return Fraction(count) * Fraction(self.rho_minus) > Fraction(self.c_load) * k


def _entropy_prime(t):
    return 1.0 + math.log(t) if t > 0 else -math.inf


PHI_PRIME: Dict[str, Callable[[float], float]] = {
    'square': lambda t: 2.0 * t,
    'quartic': lambda t: 4.0 * t ** 3,
    'entropy': _entropy_prime,
}


@dataclass
class PackingState:
    """Counts after k greedy steps; x^k_e = counts[e] / k"""
    kind: str
    k: int = 0
    counts: Dict[int, int] = field(default_factory=dict)
    active: Set[int] = field(default_factory=set)
    prune: Optional[PruneConfig] = None
    bases: Optional[List[List[int]]] = None
    pruned_at: Dict[int, int] = field(default_factory=dict)

    def edge_ids(self):
        return sorted(self.counts)

    def load(self, e):
        return Fraction(self.counts[e], self.k) if self.k else Fraction(0)

    def loads(self):
        """Exact loads per edge id"""
        return {e: self.load(e) for e in self.edge_ids()}

    def load_vector(self, edge_ids=None):
        """Float loads as a numpy array in edge id order"""
        ids = self.edge_ids() if edge_ids is None else edge_ids
        if not self.k:
            return np.zeros(len(ids))
        return np.array([self.counts[e] for e in ids], dtype=float) / self.k

    def to_frame(self):
        ids = self.edge_ids()
        return pd.DataFrame({
            'edge_id': ids,
            'count': [self.counts[e] for e in ids],
            'k': self.k,
            'load': [str(self.load(e)) for e in ids],
            'active': [e in self.active for e in ids],
        })

    def export_csv(self, filepath):
        self.to_frame().to_csv(filepath, index=False)
        return filepath

    def save(self, filepath):
        joblib.dump(self, filepath)
        return filepath

    @staticmethod
    def load_state(filepath):
        return joblib.load(filepath)


class GreedyPacker:
    """Step-by-step greedy base packing"""

    def __init__(self, graph, kind=GRAPHIC, prune=None, retain_bases=False,
                 transform=None, order=None):
        """
        Initialize packer

        Args:
            graph: Graph (not modified)
            kind: 'graphic' or 'bicircular'
            prune: PruneConfig or None
            retain_bases: keep B_1..B_k on the state
            transform: name in PHI_PRIME or callable; greedy then sorts by
                phi'(x^k) instead of by counts
            order: mapping edge id -> tie-break index (edge id if None)
        """
        if graph.m == 0:
            raise EmptyGraph("Cannot pack bases of a graph without edges")
        self.graph = graph
        self.kind = check_kind(kind)
        if isinstance(transform, str):
            if transform not in PHI_PRIME:
                raise ValueError(f"Unknown transform: {transform}")
            transform = PHI_PRIME[transform]
        self.transform = transform
        self.order = order
        self.m = graph.m
        ids = graph.edge_ids()
        self.state = PackingState(
            kind=kind,
            counts={e: 0 for e in ids},
            active=set(ids),
            prune=prune,
            bases=[] if retain_bases else None,
        )

    def _key(self, e):
        st = self.state
        tie = e if self.order is None else self.order[e]
        if self.transform is None:
            return (st.counts[e], tie)
        value = self.transform(st.counts[e] / st.k) if st.k else 0.0
        return (value, tie)

    def step(self):
        """Pack one more base; returns it as a sorted list"""
        st = self.state
        if not st.active:
            raise EmptyActiveSet("No active edges left to pack")
        base = sorted(greedy_base(self.graph, self._key, self.kind, edges=st.active))
        for e in base:
            st.counts[e] += 1
        st.k += 1
        if st.bases is not None:
            st.bases.append(base)
        if st.prune is not None:
            for e in sorted(st.active):
                if st.prune.should_prune(st.counts[e], st.k, self.m):
                    st.active.discard(e)
                    st.pruned_at[e] = st.k
            if not st.active:
                raise EmptyActiveSet(f"Pruning removed every edge at k={st.k}")
        return base

    def run(self, k):
        """Advance until k bases are packed"""
        while self.state.k < k:
            self.step()
        return self.state


def pack(g, kind, k, retain_bases=False, transform=None, order=None):
    """
    Greedy packing of k bases without pruning

    Returns:
        PackingState with counts after k steps
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    packer = GreedyPacker(g, kind=kind, retain_bases=retain_bases,
                          transform=transform, order=order)
    return packer.run(k)


def pack_pruned(g, k, rho_minus, rho_plus, kind=BICIRCULAR, c_prune=24, c_load=2,
                retain_bases=False):
    """Greedy packing with pruning over the interval [rho_minus, rho_plus]"""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    prune = PruneConfig(rho_minus, rho_plus, c_prune=c_prune, c_load=c_load)
    packer = GreedyPacker(g, kind=kind, prune=prune, retain_bases=retain_bases)
    return packer.run(k)


def min_load_estimate(st):
    """
    Density estimate k / min active count

    Returns:
        Fraction, or math.inf when some active edge was never packed
    """
    if st.k < 1:
        raise ValueError("Need at least one packed base")
    if not st.active:
        raise EmptyActiveSet("No active edges")
    low = min(st.counts[e] for e in st.active)
    if low == 0:
        return math.inf
    return Fraction(st.k, low)


def threshold_k(rho, m, eps, c_k=20):
    """Number of steps after which 1/min x^k <= (1+eps) rho is guaranteed"""
    return math.ceil(c_k * rho * math.log(m) / eps ** 2)


class PotentialCheck(NamedTuple):
    lhs: float
    rhs: float

    @property
    def holds(self):
        return self.lhs <= self.rhs + 1e-9


def potential_check(st, rho, alpha, edges=None):
    """
    Both sides (log scale) of the truncated-greedy potential inequality

        sum_e (1+alpha)^(k/rho - c_e) <= m (1+alpha)^(k/rho) (1 - alpha/(rho(1+alpha)))^k

    Args:
        st: PackingState (pruned or not)
        rho: density of the matroid
        alpha: > -1 and nonzero; the full active sum is bounded for alpha > 0,
            sums over the densest set for alpha in (-1, 0)
        edges: edges to sum over (active set if None)
    """
    if alpha <= -1 or alpha == 0:
        raise ValueError(f"alpha must be > -1 and nonzero, got {alpha}")
    ids = sorted(st.active if edges is None else set(edges) & st.active)
    m = len(st.counts)
    log_base = math.log1p(alpha)
    exponents = np.array([(st.k / rho - st.counts[e]) * log_base for e in ids])
    lhs = float(np.logaddexp.reduce(exponents)) if len(ids) else -math.inf
    rhs = (math.log(m) + st.k / rho * log_base
           + st.k * math.log(1 - alpha / (rho * (1 + alpha))))
    return PotentialCheck(lhs, rhs)


class LoadCapCheck(NamedTuple):
    applies: bool
    worst: Fraction
    cap: float

    @property
    def holds(self):
        return not self.applies or self.worst <= self.cap + 1e-9


def load_cap_check(st, rho, eps, edges=None):
    """
    Surviving-edge load cap x_e <= (1+eps)/rho over a densest set

    The cap is only claimed once k >= 6 rho ln m / eps^2; below that the
    check reports applies=False and always holds.

    Args:
        st: PackingState (pruned or not)
        rho: density of the matroid
        eps: accuracy in (0, 1]
        edges: densest edge set H (active set if None)
    """
    if not 0 < eps <= 1:
        raise ValueError(f"eps must be in (0, 1], got {eps}")
    ids = sorted(st.active if edges is None else set(edges) & st.active)
    if not ids:
        raise EmptyActiveSet("No surviving edges to check")
    m = len(st.counts)
    applies = st.k >= 6 * rho * math.log(m) / eps ** 2
    worst = max(st.load(e) for e in ids)
    return LoadCapCheck(applies, worst, (1 + eps) / rho)

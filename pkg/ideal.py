"""
Exact Oracles
Desk-scale exact answers used to check the packing engines:

* densest subgraph / fractional arboricity by vertex-subset enumeration
* ideal loads x* by repeated densest-set contraction
* convex combinations of bases realizing x* (stitching across levels)
* all minimum cuts by bipartition enumeration

All arithmetic is rational.
"""

import math
from fractions import Fraction
from typing import Dict, FrozenSet, List, NamedTuple, Tuple

import numpy as np

from errors import Disconnected, EmptyGraph, InternalConsistencyError, TooLarge
from packing import BICIRCULAR, GRAPHIC, check_kind, greedy_base, min_weight_base, pack, rank


DENSEST_CAP = 22
MINCUT_CAP = 20


class DensestResult(NamedTuple):
    """Densest vertex set S, its edge set H and the density ratio"""
    vertices: Tuple[int, ...]
    edges: FrozenSet[int]
    ratio: Fraction
    maximal: bool


class Level(NamedTuple):
    edges: FrozenSet[int]
    value: Fraction


class IdealLoads(NamedTuple):
    loads: Dict[int, Fraction]
    levels: List[Level]

    @property
    def min_value(self):
        return min(self.loads.values())

    def density(self):
        """Inverse of the minimum load"""
        return 1 / self.min_value

    def norm_sq(self):
        return sum(x * x for x in self.loads.values())


class LongRunLoads(NamedTuple):
    loads: Dict[int, Fraction]
    k: int
    radius: float


# ---------------------------------------------------------------------------
# Subset tables
# ---------------------------------------------------------------------------

class _Minor:
    """
    Multigraph on local vertices 0..p-1 standing for a matroid minor

    For the bicircular kind one local vertex may be the ground: the image of
    every contracted vertex, treated as already saturated (its component
    always counts as cyclic and it adds nothing to the rank).
    """

    def __init__(self, kind, labels, edges, ground=None):
        self.kind = kind
        self.labels = labels
        self.edges = edges
        self.ground = ground
        self.p = len(labels)
        self.adj = [0] * self.p
        for _, a, b in edges:
            self.adj[a] |= 1 << b
            self.adj[b] |= 1 << a

    def induced_counts(self):
        masks = np.arange(1 << self.p, dtype=np.int64)
        counts = np.zeros(1 << self.p, dtype=np.int64)
        for _, a, b in self.edges:
            counts += ((masks >> a) & 1) & ((masks >> b) & 1)
        return counts

    def components(self, mask):
        comps = []
        rest = mask
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                bit = frontier & -frontier
                frontier ^= bit
                v = bit.bit_length() - 1
                new = self.adj[v] & mask & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            rest &= ~comp
        return comps

    def rank(self, mask, counts):
        comps = self.components(mask)
        if self.kind == GRAPHIC:
            return bin(mask).count('1') - len(comps)
        total = 0
        for comp in comps:
            size = bin(comp).count('1')
            if self.ground is not None and comp >> self.ground & 1:
                total += size - 1
            elif counts[comp] >= size:
                total += size
            else:
                total += size - 1
        return total

    def edges_within(self, mask):
        return frozenset(e for e, a, b in self.edges if mask >> a & 1 and mask >> b & 1)

    def touches_all(self, mask):
        """Every vertex of mask is incident to an edge inside mask"""
        covered = 0
        for _, a, b in self.edges:
            if mask >> a & 1 and mask >> b & 1:
                covered |= (1 << a) | (1 << b)
        return covered == mask

    def maximizers(self, per_vertex=False):
        """
        Best ratio and every mask attaining it

        The ratio is |E[S]| / r(S), or |E[S]| / |S| when per_vertex is set.
        """
        counts = self.induced_counts()
        best = None
        winners = []
        for mask in np.nonzero(counts)[0].tolist():
            r = bin(mask).count('1') if per_vertex else self.rank(mask, counts)
            ratio = Fraction(int(counts[mask]), r)
            if best is None or ratio > best:
                best = ratio
                winners = [mask]
            elif ratio == best:
                winners.append(mask)
        return best, winners


def _check_size(p, cap):
    if p > cap:
        raise TooLarge(f"{p} vertices exceed the enumeration cap of {cap}")


def _initial_minor(g, kind):
    touched = sorted({x for pair in g.edges.values() for x in pair})
    local = {v: i for i, v in enumerate(touched)}
    edges = [(e, local[u], local[v]) for e, (u, v) in sorted(g.edges.items())]
    return _Minor(kind, touched, edges)


def _reject_graphic_loops(g, kind):
    if kind == GRAPHIC and any(u == v for u, v in g.edges.values()):
        raise ValueError("The graphic matroid of a graph with self-loops has unbounded density")


# ---------------------------------------------------------------------------
# Densest subgraph
# ---------------------------------------------------------------------------

def densest_exact(g, kind):
    """
    Exact densest set by vertex-subset enumeration

    bicircular: max |E[S]| / |S|; graphic: max |E[S]| / (|S| - #components).

    Returns:
        DensestResult; `edges` is the inclusion-maximal maximizing edge set
        (the union of all maximizers) and `vertices` its vertex support
    """
    check_kind(kind)
    if g.m == 0:
        raise EmptyGraph("Densest subgraph of a graph without edges")
    _reject_graphic_loops(g, kind)
    minor = _initial_minor(g, kind)
    _check_size(minor.p, DENSEST_CAP)
    best, winners = minor.maximizers(per_vertex=(kind == BICIRCULAR))
    edges = frozenset().union(*(minor.edges_within(w) for w in winners))
    support = sorted({x for e in edges for x in g.edges[e]})
    if kind == BICIRCULAR:
        ratio = Fraction(len(edges), len(support))
    else:
        ratio = Fraction(len(edges), rank(g, kind, edges))
    return DensestResult(tuple(support), edges, ratio, ratio == best)


def densest_by_rule(g, kind):
    """
    Densest vertex set chosen among tied maximizers by size, then by the
    lexicographically smallest vertex tuple (vertices must all touch E[S])
    """
    check_kind(kind)
    if g.m == 0:
        raise EmptyGraph("Densest subgraph of a graph without edges")
    _reject_graphic_loops(g, kind)
    minor = _initial_minor(g, kind)
    _check_size(minor.p, DENSEST_CAP)
    best, winners = minor.maximizers(per_vertex=(kind == BICIRCULAR))
    chosen = min(
        (w for w in winners if minor.touches_all(w)),
        key=lambda w: (-bin(w).count('1'),
                       tuple(minor.labels[i] for i in range(minor.p) if w >> i & 1)),
    )
    vertices = tuple(minor.labels[i] for i in range(minor.p) if chosen >> i & 1)
    return DensestResult(vertices, minor.edges_within(chosen), best, False)


def density_ratio(g, kind, vertices):
    """Recompute |E[S]| / |S| (bicircular) or |E[S]| / r(E[S]) (graphic)"""
    inside = set(vertices)
    edges = [e for e, (u, v) in g.edges.items() if u in inside and v in inside]
    if check_kind(kind) == BICIRCULAR:
        return Fraction(len(edges), len(inside))
    return Fraction(len(edges), rank(g, kind, edges))


# ---------------------------------------------------------------------------
# Ideal loads by contraction
# ---------------------------------------------------------------------------

def _contract(minor, chosen_edges):
    """Minor after contracting the edge set chosen_edges"""
    remaining = [(e, a, b) for e, a, b in minor.edges if e not in chosen_edges]
    if minor.kind == GRAPHIC:
        parent = list(range(minor.p))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e, a, b in minor.edges:
            if e in chosen_edges:
                parent[find(a)] = find(b)
        image = {x: find(x) for x in range(minor.p)}
    else:
        saturated = set()
        for e, a, b in minor.edges:
            if e in chosen_edges:
                saturated.update((a, b))
        if minor.ground is not None:
            saturated.add(minor.ground)
        image = {x: ('ground' if x in saturated else x) for x in range(minor.p)}

    mapped = [(e, image[a], image[b]) for e, a, b in remaining]
    keys = sorted({x for _, a, b in mapped for x in (a, b)}, key=str)
    local = {x: i for i, x in enumerate(keys)}
    edges = [(e, local[a], local[b]) for e, a, b in mapped]
    for e, a, b in edges:
        if minor.kind == GRAPHIC and a == b:
            raise InternalConsistencyError(f"Edge {e} became a loop after contraction")
    labels = list(keys)
    ground = local.get('ground')
    return _Minor(minor.kind, labels, edges, ground=ground)


def x_star_contraction(g, kind, tie_rule='union'):
    """
    Ideal loads x* by repeated contraction of the densest set

    Args:
        g: Graph (graphic kind requires no self-loops)
        kind: 'graphic' or 'bicircular'
        tie_rule: 'union' contracts the inclusion-maximal maximizer;
            'single' contracts one maximizer picked by size then
            lexicographic order (level values may then repeat)

    Returns:
        IdealLoads with one Level per contraction
    """
    check_kind(kind)
    if tie_rule not in ('union', 'single'):
        raise ValueError(f"Unknown tie rule: {tie_rule}")
    if g.m == 0:
        raise EmptyGraph("Ideal loads of a graph without edges")
    _reject_graphic_loops(g, kind)
    minor = _initial_minor(g, kind)
    _check_size(minor.p, DENSEST_CAP)

    loads = {}
    levels = []
    while minor.edges:
        best, winners = minor.maximizers()
        if tie_rule == 'union':
            chosen = frozenset().union(*(minor.edges_within(w) for w in winners))
        else:
            pick = min(
                (w for w in winners if minor.touches_all(w)),
                key=lambda w: (-bin(w).count('1'), [i for i in range(minor.p) if w >> i & 1]),
            )
            chosen = minor.edges_within(pick)
        value = 1 / best
        for e in chosen:
            loads[e] = value
        levels.append(Level(chosen, value))
        minor = _contract(minor, chosen)
    return IdealLoads(loads, levels)


def optimality_certificate(g, kind, ideal):
    """
    (weight of the min-weight base under weights x*, squared norm of x*);
    the two agree exactly when x* is the minimum-norm point
    """
    base = min_weight_base(g, ideal.loads, kind)
    return sum(ideal.loads[e] for e in base), ideal.norm_sq()


def stitch_bases(g, kind, ideal, max_steps=64):
    """
    Explicit convex combination of bases averaging to x*

    Each level H (with everything contracted before it preloaded) is split
    into greedy bases of the level minor until the counts become exactly
    uniform; the per-level families are then combined pairwise.

    Returns:
        list of (weight, frozenset base), or None if some level never
        balanced within max_steps
    """
    combos = {frozenset(): Fraction(1)}
    contracted = []
    for level in ideal.levels:
        counts = {e: 0 for e in level.edges}
        family = []
        balanced = False
        for step in range(1, max_steps + 1):
            base = greedy_base(g, lambda e: (counts[e], e), kind,
                               edges=sorted(level.edges), preload=contracted)
            for e in base:
                counts[e] += 1
            family.append(frozenset(base))
            if all(c == step * level.value for c in counts.values()):
                balanced = True
                break
        if not balanced:
            return None
        weight = Fraction(1, len(family))
        merged = {}
        for prefix, w in combos.items():
            for part in family:
                key = prefix | part
                merged[key] = merged.get(key, Fraction(0)) + w * weight
        combos = merged
        contracted.extend(sorted(level.edges))
    return sorted(((w, b) for b, w in combos.items()), key=lambda wb: sorted(wb[1]))


def combination_average(combos, edge_ids):
    """Per-edge average of a weighted family of bases"""
    return {e: sum((w for w, b in combos if e in b), Fraction(0)) for e in edge_ids}


# ---------------------------------------------------------------------------
# Long-run packing and minimum cuts
# ---------------------------------------------------------------------------

def l2_radius(r, k):
    """sqrt(2 r ln(k+1) / k): l2 distance bound between x^k and x*"""
    return math.sqrt(2 * r * math.log(k + 1) / k)


def x_star_longrun(g, kind, k):
    """x^k from the greedy packing, with the l2 radius that must contain x*"""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    st = pack(g, kind, k)
    return LongRunLoads(st.loads(), k, l2_radius(rank(g, kind), k))


def mincuts_enumerate(g):
    """
    Edge connectivity and every minimum cut

    Returns:
        (lambda, list of frozensets), each set being the side of a minimum
        cut that contains vertex 0
    """
    if g.n < 2:
        raise ValueError("Cuts need at least two vertices")
    _check_size(g.n, MINCUT_CAP)
    if not _connected(g):
        raise Disconnected("Minimum cuts of a disconnected graph are empty")
    masks = np.arange(0, 1 << (g.n - 1), dtype=np.int64) << 1 | 1
    crossing = np.zeros(len(masks), dtype=np.int64)
    full = (1 << g.n) - 1
    for u, v in g.edges.values():
        if u != v:
            crossing += ((masks >> u) & 1) ^ ((masks >> v) & 1)
    proper = masks != full
    lam = int(crossing[proper].min())
    cuts = []
    for mask in masks[proper & (crossing == lam)].tolist():
        cuts.append(frozenset(x for x in range(g.n) if mask >> x & 1))
    return lam, cuts


def _connected(g):
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for e in g.adjacency[x]:
            u, v = g.edges[e]
            y = v if u == x else u
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == g.n


def crossing_count(g, tree, side):
    """Number of tree edges with exactly one endpoint in side"""
    return sum(1 for e in tree if (g.edges[e][0] in side) != (g.edges[e][1] in side))

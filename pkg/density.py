"""
Dynamic Density Estimation
(1+eps)-approximate densest-subgraph density of a fully dynamic graph from
pseudoforest packings: several pruned runs at geometric density scales, one
coarse unpruned run to pick the scale, and an exact answer for forests.
"""

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import pandas as pd

from dynpacking import LayeredPacking
from errors import DensityAboveRhoMax, EmptyGraph
from graph_core import DELETE, INSERT
from packing import BICIRCULAR, Components, PruneConfig, min_load_estimate, pack


@dataclass(frozen=True)
class EstimatorConfig:
    """Accuracy, density bound and threshold constants"""
    eps: float
    rho_max: float
    c_k: float = 20
    c_prune: float = 24
    c_load: float = 2
    c_coarse: float = 8
    edge_cap: Optional[int] = None
    rebuild_every: Optional[int] = None
    size_with_upper: bool = False

    def __post_init__(self):
        if not 0 < self.eps <= 1:
            raise ValueError(f"eps must lie in (0, 1], got {self.eps}")
        if self.rho_max < 1:
            raise ValueError(f"rho_max must be at least 1, got {self.rho_max}")
        if self.edge_cap is not None and self.edge_cap < 1:
            raise ValueError(f"edge_cap must be positive, got {self.edge_cap}")

    @property
    def runs(self):
        return math.ceil(math.log2(self.rho_max)) + 2

    def scale(self, i):
        """rho_i = 2^(i-1) for i = 1..runs"""
        return Fraction(2) ** (i - 1)

    def _log_m(self):
        return math.log(max(self.edge_cap or 2, 2))

    def layers(self, i):
        rho = self.scale(i + 2) if self.size_with_upper else self.scale(i)
        return math.ceil(self.c_k * float(rho) * self._log_m() / self.eps ** 2)

    def coarse_layers(self):
        return math.ceil(self.c_coarse * self.rho_max * self._log_m())

    def prune(self, i):
        return PruneConfig(self.scale(i), self.scale(i + 2),
                           c_prune=self.c_prune, c_load=self.c_load)


class DensityReport(NamedTuple):
    op_index: int
    estimate: object
    low: object
    high: object
    is_forest: bool
    selected_scale: Optional[int]
    reliable: bool = True


def forest_density(n, edges):
    """(N-1)/N for the largest component of an acyclic graph (0 if n == 0)"""
    comps = Components(n, BICIRCULAR)
    for u, v in edges:
        comps.add(u, v)
    sizes = Counter(comps.find(x) for x in range(n))
    largest = max(sizes.values(), default=0)
    if largest == 0:
        return Fraction(0)
    return Fraction(largest - 1, largest)


class MultiScaleDensity:
    """Fully dynamic density estimator"""

    def __init__(self, n, config, seed=0, verbose=False):
        """
        Args:
            n: vertex count
            config: EstimatorConfig (edge_cap is required)
            seed: treap seed passed to every run
            verbose: print a line per rebuild
        """
        if config.edge_cap is None:
            raise ValueError("EstimatorConfig.edge_cap must be set for the dynamic estimator")
        self.n = n
        self.config = config
        self.verbose = verbose
        self.coarse = LayeredPacking(n, config.coarse_layers(), seed=seed)
        self.runs = [
            LayeredPacking(n, config.layers(i), prune=config.prune(i),
                           edge_cap=config.edge_cap, seed=seed)
            for i in range(1, config.runs + 1)
        ]
        self.rebuild_every = config.rebuild_every or config.edge_cap
        self.updates = 0
        self.reports = []

    @property
    def graph(self):
        return self.coarse.graph

    def density_update(self, ev):
        """Apply an Insert or Delete event to the coarse run and every scale"""
        if ev.kind == INSERT:
            report = self.coarse.lp_insert(ev.u, ev.v, edge_id=ev.edge_id)
            for run in self.runs:
                run.lp_insert(ev.u, ev.v, edge_id=report.edge_id)
            edge_id = report.edge_id
        elif ev.kind == DELETE:
            self.coarse.lp_delete(ev.edge_id)
            for run in self.runs:
                run.lp_delete(ev.edge_id)
            edge_id = ev.edge_id
        else:
            raise ValueError(f"density_update expects Insert or Delete, got {ev.kind}")

        self.updates += 1
        if self.updates % self.rebuild_every == 0:
            for run in self.runs:
                run.rebuild()
            if self.verbose:
                print(f"[+] Rebuilt {len(self.runs)} pruned runs after {self.updates} updates")
        return edge_id

    def select_scale(self, rho_hat):
        """Run index i (1-based) with [rho', 2 rho'] inside [rho_i, rho_(i+2)]"""
        if rho_hat == math.inf:
            return None
        low = Fraction(rho_hat) / Fraction(3, 2)
        i = 1
        while Fraction(2) ** i <= low:
            i += 1
        return i

    def selected_run(self):
        """Run answering queries: the coarse run on forests, else the selected scale"""
        if self.coarse.layers[0].pf_summary().is_forest:
            return self.coarse
        i = self.select_scale(self.coarse.estimate())
        if i is None or i > len(self.runs):
            i = len(self.runs)
        return self.runs[i - 1]

    def density_query(self, op_index=None):
        """
        Current density estimate

        Returns:
            DensityReport with estimate and guarantee interval [low, high]
        """
        op_index = self.updates if op_index is None else op_index
        summary = self.coarse.layers[0].pf_summary()
        if summary.is_forest:
            value = forest_density(self.n, self.graph.edges.values())
            report = DensityReport(op_index, value, value, value, True, None)
            self.reports.append(report)
            return report

        rho_hat = self.coarse.estimate()
        i = self.select_scale(rho_hat)
        reliable = i is not None and i <= len(self.runs)
        if not reliable:
            warnings.warn(DensityAboveRhoMax(
                f"Coarse estimate {rho_hat} exceeds rho_max={self.config.rho_max}"))
            i = len(self.runs)

        value = self.runs[i - 1].estimate()
        if value == math.inf:
            low, high = math.inf, math.inf
        elif reliable:
            low, high = value / (1 + Fraction(str(self.config.eps))), value
        else:
            low, high = value / 2, math.inf
        report = DensityReport(op_index, value, low, high, False, i, reliable)
        self.reports.append(report)
        return report

    def report_frame(self):
        def fmt(x):
            return 'inf' if x == math.inf else str(x)
        return pd.DataFrame({
            'op_index': [r.op_index for r in self.reports],
            'estimate': [fmt(r.estimate) for r in self.reports],
            'low': [fmt(r.low) for r in self.reports],
            'high': [fmt(r.high) for r in self.reports],
            'is_forest': [r.is_forest for r in self.reports],
            'selected_scale': [r.selected_scale if r.selected_scale is not None else ''
                               for r in self.reports],
        })

    def export_csv(self, filepath):
        self.report_frame().to_csv(filepath, index=False)
        return filepath


def degree_bound(g):
    """Maximum degree: a valid upper bound on the density"""
    return max((len(adj) for adj in g.adjacency), default=0)


def single_scale_estimator(g, eps, rho_max=None, c_k=20):
    """
    Static estimate from one unpruned packing sized by a density bound

    Args:
        g: Graph
        eps: accuracy in (0, 1]
        rho_max: upper bound on the density (maximum degree if None)
        c_k: threshold constant

    Returns:
        Fraction estimate (exact (N-1)/N for forests)
    """
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    if g.m == 0:
        raise EmptyGraph("Density estimate needs at least one edge")
    if g.is_forest():
        return forest_density(g.n, g.edges.values())
    bound = rho_max if rho_max is not None else max(degree_bound(g), 1)
    k = math.ceil(c_k * bound * math.log(max(g.m, 2)) / eps ** 2)
    return min_load_estimate(pack(g, BICIRCULAR, k))

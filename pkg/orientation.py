"""
Fractional Out-Orientation
Implicit fractional orientation induced by a layered pseudoforest packing:
an edge's share u->v is the fraction of the layers containing it that orient
it u->v.
"""

from collections import defaultdict
from fractions import Fraction
from typing import Dict, NamedTuple, Optional

from errors import UncoveredEdge


class EdgeOrientation(NamedTuple):
    edge_id: int
    u: int
    v: int
    d_uv: Fraction
    d_vu: Fraction
    coverage: int

    def line(self):
        """CLI response line: 'id u v d_uv d_vu coverage'"""
        return f"{self.edge_id} {self.u} {self.v} {self.d_uv} {self.d_vu} {self.coverage}"


class OutdegreeAudit(NamedTuple):
    outdeg: Dict[int, Fraction]
    max_outdeg: Fraction
    guaranteed: bool
    bound: Optional[float]

    @property
    def within_bound(self):
        return self.bound is None or self.max_outdeg <= self.bound


def orient_edge(lp, e):
    """
    Fractional orientation of edge e over the layers that contain it

    Args:
        lp: LayeredPacking (quiesced)
        e: edge id present in the graph

    Returns:
        EdgeOrientation
    """
    u, v = lp.graph.endpoints(e)
    layers = lp.layers_containing(e)
    if not layers:
        raise UncoveredEdge(f"Edge {e} is not contained in any layer")
    if u == v:
        return EdgeOrientation(e, u, v, Fraction(1), Fraction(0), len(layers))
    forward = sum(1 for i in layers if lp.layers[i].pf_orient(e).tail == u)
    d_uv = Fraction(forward, len(layers))
    return EdgeOrientation(e, u, v, d_uv, 1 - d_uv, len(layers))


def outdeg_audit(lp, rho=None, eps=None):
    """
    Out-degree of every vertex under the induced fractional orientation

    Args:
        lp: LayeredPacking
        rho, eps: when both are given, the audit carries the bound (1+eps)*rho

    Returns:
        OutdegreeAudit; `guaranteed` is False for forests, where the bound
        does not apply
    """
    outdeg = defaultdict(Fraction)
    for x in range(lp.n):
        outdeg[x] = Fraction(0)
    for e in lp.graph.edge_ids():
        entry = orient_edge(lp, e)
        outdeg[entry.u] += entry.d_uv
        if entry.u != entry.v:
            outdeg[entry.v] += entry.d_vu
    top = max(outdeg.values(), default=Fraction(0))
    bound = None
    if rho is not None and eps is not None:
        bound = (1 + eps) * rho
    guaranteed = not lp.graph.is_forest()
    return OutdegreeAudit(dict(outdeg), top, guaranteed, bound)

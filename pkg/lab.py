"""
Packing Lab
Convergence of greedy spanning-tree packing to the ideal loads, the norm
bounds it must respect, ladder lower-bound curves and the one-respecting
tree check.
"""

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Optional

import joblib
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from ideal import crossing_count, mincuts_enumerate, x_star_contraction
from ladder import frozen_spec, ladder_graph, tile_trace
from packing import GRAPHIC, GreedyPacker, rank


CONVERGENCE_COLUMNS = ['k', 'err_inf', 'err_2', 'err_p', 'thorup', 'bound2', 'boundp']
TILE_COLUMNS = ['k', 'tiles', 'residual']
LOWER_BOUND_COLUMNS = ['k', 'err_inf', 'bound', 'lambda_bound', 'holds']
RESPECT_COLUMNS = ['graph', 'n', 'm', 'lam', 'k', 'cap']
P_NORM = 10
P_NORM_MIN_K = 100
LOWER_BOUND_CONSTANT = 0.5


@dataclass
class ConvergenceRecord:
    """Errors of x^k against x* at one k, with the bounds they must obey"""
    k: int
    err_inf: float
    err_2: float
    err_p: float
    thorup: float
    bound2: float
    boundp: float
    dist_2: float = 0.0
    radius: float = 0.0
    err_sq: float = 0.0
    bound_sq: float = 0.0
    err_pp: float = 0.0
    bound_pp: float = 0.0

    def violations(self):
        """Names of the bounds this record breaks"""
        tol = 1e-12
        broken = []
        if self.err_inf > self.thorup + tol:
            broken.append('thorup')
        if self.err_2 > self.bound2 + tol:
            broken.append('bound2')
        if self.err_sq > self.bound_sq + tol:
            broken.append('bound_sq')
        if self.dist_2 > self.radius + tol:
            broken.append('radius')
        if self.k >= P_NORM_MIN_K:
            if self.err_p > self.boundp + tol:
                broken.append('boundp')
            if self.err_pp > self.bound_pp + tol:
                broken.append('bound_pp')
        return broken


def thorup_bound(m, k, lam):
    return math.sqrt(6 * math.log(m) / (k * lam))


def norm2_bound(m, k):
    return math.sqrt(m) * math.log(k + 1) / k


def norm_sq_bound(r, k):
    return 2 * r * math.log(k + 1) / k


def pnorm_bound(m, k, p=P_NORM):
    """Factor 2 absorbs the (1 + o(1)) slack for k >= 100"""
    return 2 * (p / 2) * m ** (1 / p) * math.log(k) / k


def pnorm_power_bound(x_star, k, p=P_NORM):
    return 2 * (p * p / 2) * float(np.sum(x_star ** (p - 1))) * math.log(k) / k


def lower_bound(k, lam, c=LOWER_BOUND_CONSTANT):
    """c * sqrt(1 / (3 k lam)); equals c * sqrt(k/6) / k on the single ladder"""
    return c * math.sqrt(1 / (3 * k * lam))


def ladder_lower_bound(k, c=LOWER_BOUND_CONSTANT):
    """Ladder lower bound c * sqrt(1 / (6 k)) on G_d and G_d^w"""
    return c * math.sqrt(1 / (6 * k))


def edge_connectivity(g):
    lam, _ = mincuts_enumerate(g)
    return lam


def _record(k, counts, x_star, x_star_sq, m, r, lam, p):
    x = counts / k
    diff = x - x_star
    exact_sq = Fraction(int(np.sum(counts.astype(object) ** 2)), k * k)
    gap_sq = exact_sq - x_star_sq
    norm_x = math.sqrt(exact_sq)
    norm_star = math.sqrt(x_star_sq)
    err_2 = float(gap_sq) / (norm_x + norm_star) if gap_sq else 0.0
    pp_x = float(np.sum(x ** p))
    pp_star = float(np.sum(x_star ** p))
    return ConvergenceRecord(
        k=k,
        err_inf=float(np.max(np.abs(diff))),
        err_2=err_2,
        err_p=max(pp_x ** (1 / p) - pp_star ** (1 / p), 0.0),
        thorup=thorup_bound(m, k, lam),
        bound2=norm2_bound(m, k),
        boundp=pnorm_bound(m, k, p),
        dist_2=float(np.linalg.norm(diff)),
        radius=math.sqrt(norm_sq_bound(r, k)),
        err_sq=float(gap_sq),
        bound_sq=norm_sq_bound(r, k),
        err_pp=max(pp_x - pp_star, 0.0),
        bound_pp=pnorm_power_bound(x_star, k, p),
    )


def convergence_curves(g, k_max, p=P_NORM, x_star=None, lam=None, ks=None):
    """
    Greedy MST packing errors against x* for k = 1..k_max

    Args:
        g: connected Graph
        k_max: last packing step
        p: exponent of the p-norm columns
        x_star: mapping edge id -> ideal load (contraction oracle if None)
        lam: edge connectivity (enumerated if None)
        ks: steps to record (every step if None)

    Returns:
        list of ConvergenceRecord
    """
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    if x_star is None:
        x_star = x_star_contraction(g, GRAPHIC).loads
    if lam is None:
        lam = edge_connectivity(g)
    ids = g.edge_ids()
    star = np.array([float(x_star[e]) for e in ids])
    star_sq = sum(Fraction(x_star[e]) ** 2 for e in ids)
    r = rank(g, GRAPHIC)
    wanted = set(range(1, k_max + 1)) if ks is None else {k for k in ks if 1 <= k <= k_max}

    packer = GreedyPacker(g, kind=GRAPHIC)
    records = []
    for k in range(1, k_max + 1):
        packer.step()
        if k in wanted:
            counts = np.array([packer.state.counts[e] for e in ids], dtype=np.int64)
            records.append(_record(k, counts, star, star_sq, g.m, r, lam, p))
    return records


def records_frame(records, full=False):
    frame = pd.DataFrame([asdict(r) for r in records])
    if frame.empty:
        return pd.DataFrame(columns=CONVERGENCE_COLUMNS)
    return frame if full else frame[CONVERGENCE_COLUMNS]


def export_convergence_csv(records, filepath):
    records_frame(records).to_csv(filepath, index=False, float_format='%.12f')
    return filepath


def bound_violations(records):
    """(k, bound name) for every broken bound"""
    return [(r.k, name) for r in records for name in r.violations()]


# ---------------------------------------------------------------------------
# Ladders
# ---------------------------------------------------------------------------

def ladder_curves(d, k_max, w=1, ks=None):
    """Convergence records on G_d^w with the uniform x* and lambda = 2w"""
    spec = frozen_spec(d, w)
    g = ladder_graph(spec)
    uniform = spec.ideal_load()
    return convergence_curves(g, k_max, x_star={e: uniform for e in g.edge_ids()},
                              lam=spec.connectivity, ks=ks)


def lower_bound_holds(record, c=LOWER_BOUND_CONSTANT):
    return record.err_inf >= ladder_lower_bound(record.k, c)


def lower_bound_frame(records, lam, c=LOWER_BOUND_CONSTANT):
    """
    err_inf next to the ladder bound c*sqrt(1/(6k)) and the general c*sqrt(1/(3k lam))

    Rows with holds == False are measured mismatches of the ladder bound.
    """
    return pd.DataFrame({
        'k': [r.k for r in records],
        'err_inf': [r.err_inf for r in records],
        'bound': [ladder_lower_bound(r.k, c) for r in records],
        'lambda_bound': [lower_bound(r.k, lam, c) for r in records],
        'holds': [lower_bound_holds(r, c) for r in records],
    }, columns=LOWER_BOUND_COLUMNS)


def tile_frame(trace):
    return pd.DataFrame({
        'k': [t.k for t in trace],
        'tiles': [str(t) for t in trace],
        'residual': [t.residual for t in trace],
    }, columns=TILE_COLUMNS)


def export_tile_csv(trace, filepath):
    tile_frame(trace).to_csv(filepath, index=False)
    return filepath


def ladder_tile_trace(d, k_min=54, k_max=None):
    """Tile strings of G_d from k_min up to min(k_max, d^2/4)"""
    cap = d * d // 4
    k_max = cap if k_max is None else min(k_max, cap)
    return tile_trace(frozen_spec(d), k_min, k_max)


# ---------------------------------------------------------------------------
# One-respecting trees
# ---------------------------------------------------------------------------

class RespectResult(NamedTuple):
    found: bool
    tree_index: Optional[int]
    cut: Optional[frozenset]
    lam: int


def one_respecting_check(g, k):
    """
    Scan the first k greedy trees for one crossing some minimum cut once

    Returns:
        RespectResult with the earliest witnessing tree (0-based)
    """
    lam, cuts = mincuts_enumerate(g)
    packer = GreedyPacker(g, kind=GRAPHIC)
    for index in range(k):
        tree = packer.step()
        for side in cuts:
            if crossing_count(g, tree, side) == 1:
                return RespectResult(True, index, side, lam)
    return RespectResult(False, None, None, lam)


def respecting_k_cap(g, lam):
    """64 lambda^3 ceil(ln m) trees"""
    return 64 * lam ** 3 * max(math.ceil(math.log(g.m)), 1)


def smallest_respecting_k(g):
    """Number of trees needed for a one-respecting tree, or None within the cap"""
    lam = edge_connectivity(g)
    result = one_respecting_check(g, respecting_k_cap(g, lam))
    return result.tree_index + 1 if result.found else None


def respecting_frame(graphs):
    """
    Smallest one-respecting k of each named graph against its cap

    Returns:
        DataFrame with columns RESPECT_COLUMNS; k is None when the cap is reached
    """
    rows = []
    for name, g in graphs.items():
        lam = edge_connectivity(g)
        cap = respecting_k_cap(g, lam)
        result = one_respecting_check(g, cap)
        rows.append({
            'graph': name,
            'n': g.n,
            'm': g.m,
            'lam': lam,
            'k': result.tree_index + 1 if result.found else None,
            'cap': cap,
        })
    return pd.DataFrame(rows, columns=RESPECT_COLUMNS)


# ---------------------------------------------------------------------------
# Sweeps and charts
# ---------------------------------------------------------------------------

def _sweep_one(name, g, k_max, ks):
    records = convergence_curves(g, k_max, ks=ks)
    frame = records_frame(records, full=True)
    frame.insert(0, 'graph', name)
    return frame


def convergence_sweep(graphs, k_max, ks=None, n_jobs=1):
    """
    Convergence records for several named graphs

    Args:
        graphs: mapping name -> Graph
        n_jobs: joblib worker count

    Returns:
        DataFrame with a 'graph' column
    """
    frames = joblib.Parallel(n_jobs=n_jobs)(
        joblib.delayed(_sweep_one)(name, g, k_max, ks) for name, g in sorted(graphs.items())
    )
    if not frames:
        return pd.DataFrame()
    return pd.concat(frames, ignore_index=True)


def plot_convergence(records, filepath, title=None):
    """err_inf and the Thorup bound against k, written as SVG"""
    ks = [r.k for r in records]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(ks, [r.err_inf for r in records], marker='.', linestyle='none',
            label='max |x^k - x*|')
    ax.plot(ks, [r.thorup for r in records], label='sqrt(6 ln m / (k lambda))')
    ax.plot(ks, [r.err_2 for r in records], marker='.', linestyle='none',
            label='||x^k|| - ||x*||')
    ax.plot(ks, [r.bound2 for r in records], label='sqrt(m) ln(k+1) / k')
    ax.set_xscale('log')
    ax.set_yscale('log')
    ax.set_xlabel('k')
    ax.set_ylabel('error')
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    Path(filepath).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(filepath, format='svg')
    plt.close(fig)
    return filepath


def main():
    """Ladder convergence demo"""
    print("=" * 70)
    print("LADDER CONVERGENCE")
    print("=" * 70)
    records = ladder_curves(30, 400, ks=[1, 10, 54, 96, 200, 400])
    for r in records:
        flag = '[-]' if r.violations() else '[+]'
        print(f"{flag} k={r.k:4d}  err_inf={r.err_inf:.6f}  thorup={r.thorup:.6f}")


if __name__ == '__main__':
    main()

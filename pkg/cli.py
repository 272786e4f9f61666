"""
Command Line Interface
Binds the packing library to graph files, update streams and CSV outputs.

Exit status: 0 success, 2 usage or configuration error, 3 parse error,
4 invariant violation.
"""

import argparse
import math
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import pandas as pd

from corpus import random_connected
from density import EstimatorConfig, MultiScaleDensity
from dynpacking import LayeredPacking
from errors import (
    DensityAboveRhoMax,
    InternalConsistencyError,
    NoValidTiling,
    PackingToolkitError,
    ParseError,
)
from graph_core import (
    DELETE,
    INSERT,
    QUERY_DENSITY,
    QUERY_ORIENTATION,
    parse_graph_file,
    parse_update_stream,
    stream_vertex_count,
)
from ideal import x_star_contraction
from ladder import tile_step_check
from lab import (
    bound_violations,
    convergence_curves,
    export_convergence_csv,
    export_tile_csv,
    ladder_curves,
    ladder_tile_trace,
    plot_convergence,
)
from orientation import orient_edge
from packing import GRAPHIC, KINDS, min_load_estimate, pack, pack_pruned, threshold_k


COMMANDS = ('density-stream', 'orient-stream', 'ideal-loads', 'pack', 'converge', 'ladder-verify')

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INVARIANT = 4


@dataclass(frozen=True)
class CliConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    format: str = 'csv'
    eps: float = 0.25
    rho_max: float = 8.0
    seed: int = 0
    kind: str = GRAPHIC
    k: Optional[int] = None
    edge_cap: Optional[int] = None
    c_k: float = 20.0
    c_coarse: float = 8.0
    prune: Optional[tuple] = None
    d: int = 30
    w: int = 1
    k_min: int = 54
    k_max: Optional[int] = None
    every: int = 1
    random_graph: Optional[tuple] = None
    svg: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command: {self.command}")
        if not 0 < self.eps <= 1:
            raise ValueError(f"eps must lie in (0, 1], got {self.eps}")
        if self.rho_max < 1:
            raise ValueError(f"rho_max must be at least 1, got {self.rho_max}")
        if self.format != 'csv':
            raise ValueError(f"Unknown output format: {self.format}")
        if self.kind not in KINDS:
            raise ValueError(f"Unknown matroid kind: {self.kind}")


def fmt(x):
    """Exact rationals as p/q, infinity as 'inf', floats with 12 digits"""
    if x is None:
        return '-'
    if x == math.inf:
        return 'inf'
    if isinstance(x, (int, Fraction)):
        return str(x)
    return f"{x:.12f}"


def _log(message):
    print(message, file=sys.stderr)


def _read(path, stdin):
    if path is None or path == '-':
        return stdin.read()
    with open(path, 'r') as f:
        return f.read()


def _peak_edges(events):
    live = peak = 0
    for ev in events:
        if ev.kind == INSERT:
            live += 1
            peak = max(peak, live)
        elif ev.kind == DELETE:
            live -= 1
    return max(peak, 2)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _density_stream(config, stdin, out):
    events = parse_update_stream(_read(config.input, stdin))
    n = stream_vertex_count(events)
    est = MultiScaleDensity(n, EstimatorConfig(
        config.eps, config.rho_max, c_k=config.c_k, c_coarse=config.c_coarse,
        edge_cap=config.edge_cap or _peak_edges(events)))
    for op_index, ev in enumerate(events):
        if ev.is_update:
            est.density_update(ev)
        elif ev.kind == QUERY_DENSITY:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter('always', DensityAboveRhoMax)
                r = est.density_query(op_index)
            for w in caught:
                _log(f"[-] {w.message}")
            print(f"{r.op_index} {fmt(r.estimate)} {fmt(r.low)} {fmt(r.high)} "
                  f"{r.is_forest} {fmt(r.selected_scale)}", file=out)
        elif ev.kind == QUERY_ORIENTATION:
            print(orient_edge(est.selected_run(), ev.edge_id).line(), file=out)
    est.coarse.check_invariants()
    for run in est.runs:
        run.check_invariants()
    if config.output:
        est.export_csv(config.output)
        _log(f"[+] Density reports written to {config.output}")
    return EXIT_OK


def _orient_stream(config, stdin, out):
    events = parse_update_stream(_read(config.input, stdin))
    n = stream_vertex_count(events)
    m = config.edge_cap or _peak_edges(events)
    k = config.k or threshold_k(config.rho_max, m, config.eps, c_k=config.c_k)
    lp = LayeredPacking(n, k)
    for ev in events:
        if ev.kind == INSERT:
            lp.lp_insert(ev.u, ev.v, edge_id=ev.edge_id)
        elif ev.kind == DELETE:
            lp.lp_delete(ev.edge_id)
        elif ev.kind == QUERY_ORIENTATION:
            print(orient_edge(lp, ev.edge_id).line(), file=out)
        else:
            print(fmt(lp.estimate()), file=out)
    lp.check_invariants()
    if config.output:
        lp.export_recourse_csv(config.output)
        _log(f"[+] Recourse log written to {config.output}")
    return EXIT_OK


def _ideal_loads(config, stdin, out):
    g = parse_graph_file(_read(config.input, stdin))
    ideal = x_star_contraction(g, config.kind)
    for e in sorted(ideal.loads):
        print(f"{e} {fmt(ideal.loads[e])}", file=out)
    _log(f"[+] {len(ideal.levels)} levels, density {fmt(ideal.density())}")
    if config.output:
        ids = sorted(ideal.loads)
        pd.DataFrame({'edge_id': ids, 'load': [str(ideal.loads[e]) for e in ids]}) \
            .to_csv(config.output, index=False)
    return EXIT_OK


def _pack(config, stdin, out):
    g = parse_graph_file(_read(config.input, stdin))
    k = config.k or 1
    if config.prune:
        st = pack_pruned(g, k, *config.prune, kind=config.kind)
    else:
        st = pack(g, config.kind, k)
    for e in st.edge_ids():
        print(f"{e} {st.counts[e]} {fmt(st.load(e))}", file=out)
    print(f"estimate {fmt(min_load_estimate(st))}", file=out)
    if config.output:
        st.export_csv(config.output)
        _log(f"[+] Loads written to {config.output}")
    return EXIT_OK


def _converge(config, stdin, out):
    k_max = config.k_max or 1000
    ks = range(config.every, k_max + 1, config.every)
    if config.random_graph:
        n, m = config.random_graph
        records = convergence_curves(random_connected(n, m, config.seed), k_max, ks=ks)
    elif config.input:
        records = convergence_curves(parse_graph_file(_read(config.input, stdin)), k_max, ks=ks)
    else:
        records = ladder_curves(config.d, k_max, w=config.w, ks=ks)
    for r in records:
        print(f"{r.k} {fmt(r.err_inf)} {fmt(r.err_2)} {fmt(r.err_p)} "
              f"{fmt(r.thorup)} {fmt(r.bound2)} {fmt(r.boundp)}", file=out)
    if config.output:
        export_convergence_csv(records, config.output)
    if config.svg:
        plot_convergence(records, config.svg)
    broken = bound_violations(records)
    for k, name in broken:
        _log(f"[-] k={k}: {name} bound violated")
    return EXIT_INVARIANT if broken else EXIT_OK


def _ladder_verify(config, stdin, out):
    trace = ladder_tile_trace(config.d, config.k_min, config.k_max)
    failed = False
    for tiles in trace:
        print(f"{tiles.k} {tiles} {tiles.residual}", file=out)
    for prev, nxt in zip(trace, trace[1:]):
        check = tile_step_check(prev, nxt)
        if not check.ok:
            failed = True
            for problem in check.forbidden + check.mismatches:
                _log(f"[-] k={prev.k}->{nxt.k}: {problem}")
    if config.output:
        export_tile_csv(trace, config.output)
    _log(f"{'[-]' if failed else '[+]'} {len(trace)} tile strings checked")
    return EXIT_INVARIANT if failed else EXIT_OK


HANDLERS = {
    'density-stream': _density_stream,
    'orient-stream': _orient_stream,
    'ideal-loads': _ideal_loads,
    'pack': _pack,
    'converge': _converge,
    'ladder-verify': _ladder_verify,
}


def run(config, stdin=None, out=None):
    """
    Dispatch one command

    Returns:
        exit status
    """
    stdin = sys.stdin if stdin is None else stdin
    out = sys.stdout if out is None else out
    try:
        return HANDLERS[config.command](config, stdin, out)
    except ParseError as e:
        _log(f"[-] Parse error: {e}")
        return EXIT_PARSE
    except (InternalConsistencyError, NoValidTiling) as e:
        _log(f"[-] Invariant violated: {e}")
        return EXIT_INVARIANT
    except (PackingToolkitError, ValueError, KeyError) as e:
        _log(f"[-] {e}")
        return EXIT_USAGE


def build_parser():
    parser = argparse.ArgumentParser(prog='packing', description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p, stream=False):
        p.add_argument('input', nargs='?', default=None,
                       help="input file ('-' or omitted for stdin)" if stream else 'graph file')
        p.add_argument('--out', dest='output', default=None, help='CSV output path')
        p.add_argument('--format', default='csv', choices=['csv'])
        p.add_argument('--seed', type=int, default=0)

    for name in ('density-stream', 'orient-stream'):
        p = sub.add_parser(name)
        common(p, stream=True)
        p.add_argument('--eps', type=float, default=0.25)
        p.add_argument('--rho-max', dest='rho_max', type=float, default=8.0)
        p.add_argument('--edge-cap', dest='edge_cap', type=int, default=None)
        p.add_argument('--c-k', dest='c_k', type=float, default=20.0)
        p.add_argument('--c-coarse', dest='c_coarse', type=float, default=8.0)
        p.add_argument('--k', type=int, default=None, help='layer count (orient-stream)')

    p = sub.add_parser('ideal-loads')
    common(p)
    p.add_argument('--kind', choices=KINDS, default=GRAPHIC)

    p = sub.add_parser('pack')
    common(p)
    p.add_argument('--kind', choices=KINDS, default=GRAPHIC)
    p.add_argument('--k', type=int, default=1)
    p.add_argument('--prune', type=float, nargs=2, metavar=('RHO_MINUS', 'RHO_PLUS'), default=None)

    p = sub.add_parser('converge')
    common(p)
    p.add_argument('--d', type=int, default=30)
    p.add_argument('--w', type=int, default=1)
    p.add_argument('--k-max', dest='k_max', type=int, default=1000)
    p.add_argument('--every', type=int, default=1)
    p.add_argument('--random', dest='random_graph', type=int, nargs=2, metavar=('N', 'M'),
                   default=None)
    p.add_argument('--svg', default=None)

    p = sub.add_parser('ladder-verify')
    p.add_argument('--d', type=int, default=30)
    p.add_argument('--k-min', dest='k_min', type=int, default=54)
    p.add_argument('--k-max', dest='k_max', type=int, default=None)
    p.add_argument('--out', dest='output', default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    for key in ('prune', 'random_graph'):
        if key in values:
            values[key] = tuple(values[key])
    try:
        config = CliConfig(**values)
    except ValueError as e:
        _log(f"[-] {e}")
        return EXIT_USAGE
    return run(config)


if __name__ == '__main__':
    sys.exit(main())

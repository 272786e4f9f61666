"""
Tests for the command line interface
"""

import io
from fractions import Fraction

import pandas as pd
import pytest

from cli import (
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_USAGE,
    CliConfig,
    build_parser,
    fmt,
    main,
    run,
)

TRIANGLE_PENDANT = "4 4\n0 0 1\n1 1 2\n2 2 0\n3 2 3\n"
TRIANGLE = "3 3\n0 0 1\n1 1 2\n2 2 0\n"
SMALL = dict(eps=1.0, rho_max=2.0, c_k=4.0, c_coarse=2.0, edge_cap=4)


def call(config, text=''):
    out = io.StringIO()
    status = run(config, stdin=io.StringIO(text), out=out)
    return status, out.getvalue().splitlines()


def test_fmt():
    from fractions import Fraction
    assert fmt(Fraction(2, 3)) == '2/3'
    assert fmt(float('inf')) == 'inf'
    assert fmt(None) == '-'
    assert fmt(0.5) == '0.500000000000'


def test_ideal_loads(tmp_path):
    target = tmp_path / 'loads.csv'
    status, lines = call(CliConfig('ideal-loads', output=str(target)), TRIANGLE_PENDANT)
    assert status == EXIT_OK
    assert lines == ['0 2/3', '1 2/3', '2 2/3', '3 1']
    assert list(pd.read_csv(target)['load']) == ['2/3', '2/3', '2/3', '1']


def test_parse_error_exit_status():
    status, lines = call(CliConfig('ideal-loads'), "3 x\n")
    assert status == EXIT_PARSE
    assert lines == []


def test_pack_command():
    status, lines = call(CliConfig('pack', k=3), TRIANGLE)
    assert status == EXIT_OK
    assert lines == ['0 2 2/3', '1 2 2/3', '2 2 2/3', 'estimate 3/2']


def test_density_stream():
    stream = "+ 0 1\n+ 1 2\n? density\n+ 2 0\n? density\n"
    status, lines = call(CliConfig('density-stream', **SMALL), stream)
    assert status == EXIT_OK
    assert lines == ['2 2/3 2/3 2/3 True -', '4 1 1/2 1 False 1']


def test_orient_stream():
    stream = "+ 0 1\n+ 1 2\n+ 2 0\n? orient 0\n? density\n"
    status, lines = call(CliConfig('orient-stream', k=4), stream)
    assert status == EXIT_OK
    edge, u, v, d_uv, d_vu, coverage = lines[0].split()
    assert (edge, u, v, coverage) == ('0', '0', '1', '4')
    assert {d_uv, d_vu} == {'0', '1'}
    assert lines[1] == '1'


def test_deleting_an_unknown_edge_is_a_usage_error():
    status, _ = call(CliConfig('orient-stream', k=2), "+ 0 1\n- 5\n")
    assert status == EXIT_USAGE


def test_converge_on_a_graph_file(tmp_path):
    graph = tmp_path / 'g.txt'
    graph.write_text(TRIANGLE_PENDANT)
    csv = tmp_path / 'curves.csv'
    svg = tmp_path / 'curves.svg'
    config = CliConfig('converge', input=str(graph), k_max=6, output=str(csv), svg=str(svg))
    status, lines = call(config)
    assert status == EXIT_OK
    assert len(lines) == 6
    assert lines[2].split()[1] == '0.000000000000'
    assert len(pd.read_csv(csv)) == 6
    assert svg.exists()


def test_ladder_verify_with_empty_range():
    status, lines = call(CliConfig('ladder-verify', d=8))
    assert status == EXIT_OK
    assert lines == []


def test_config_validation():
    with pytest.raises(ValueError):
        CliConfig('explode')
    with pytest.raises(ValueError):
        CliConfig('pack', kind='transversal')
    assert EXIT_INVARIANT == 4


def test_main_usage_errors():
    with pytest.raises(SystemExit) as info:
        main(['no-such-command'])
    assert info.value.code == 2
    assert main(['density-stream', '--eps', '2']) == EXIT_USAGE


def test_main_reads_files(tmp_path, capsys):
    graph = tmp_path / 'triangle.txt'
    graph.write_text(TRIANGLE)
    assert main(['pack', str(graph), '--k', '3', '--kind', 'bicircular']) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[-1] == 'estimate 1'


def test_parser_prune_option():
    args = build_parser().parse_args(['pack', 'g.txt', '--prune', '1', '4'])
    assert args.prune == [1.0, 4.0]


def test_orient_query_in_density_stream_uses_the_selected_scale():
    config = CliConfig('density-stream', **dict(SMALL, c_coarse=3.0))
    stream = "+ 0 1\n+ 1 2\n+ 2 0\n? density\n? orient 2\n"
    status, lines = call(config, stream)
    assert status == EXIT_OK
    assert lines[0].split()[-1] == '1'
    edge, u, v, d_uv, d_vu, coverage = lines[1].split()
    assert (edge, u, v) == ('2', '2', '0')
    assert coverage == '6'
    assert Fraction(d_uv) + Fraction(d_vu) == 1


def test_ladder_verify_over_the_full_g30_range(tmp_path):
    target = tmp_path / 'tiles.csv'
    config = CliConfig('ladder-verify', d=30, k_min=54, k_max=225, output=str(target))
    status, lines = call(config)
    assert status == EXIT_OK
    assert len(lines) == 225 - 54 + 1
    assert lines[0].split()[:2] == ['54', 'b1,m6,m1,z2']
    assert lines[96 - 54].split()[1] == 'b1,m3,m5,m4,z1'
    assert len(pd.read_csv(target)) == len(lines)

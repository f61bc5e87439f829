import json

import pytest

from ddopt.harness import (FIG1_COLUMNS, FIG2_COLUMNS, ExperimentRecord, baseline_record, fmt,
                           gnuplot_fig1, gnuplot_fig2, read_csv, records_from_rows,
                           rows_from_records, run_fig1, run_fig2, write_csv)
from ddopt.objective import I_quadrature
from ddopt.sequences import make_sequence, udd


@pytest.fixture(scope='module')
def fig1():
    return run_fig1(omega_cs=(1.0, 5.0), ns=(2, 3))


@pytest.fixture(scope='module')
def fig2():
    return run_fig2(omega_c=5.0, n_max=4)


def test_fmt():
    assert fmt(0.1) == '0.10000000000000001'
    assert fmt(3) == '3'
    assert fmt(True) == '1'
    assert float(fmt(1 / 3)) == 1 / 3


def test_fig1_shape(fig1):
    rows, results = fig1
    assert len(rows) == 2 * (2 + 3)
    keys = [(r['omega_c'], r['n'], r['j']) for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        assert set(r) == set(FIG1_COLUMNS)
        assert r['abs_deviation'] == abs(r['delta_hlodd'] - r['delta_udd'])
    assert set(results) == {(1.0, 2), (1.0, 3), (5.0, 2), (5.0, 3)}


def test_fig2_shape(fig2):
    rows, _ = fig2
    assert [r['n'] for r in rows] == [1, 2, 3, 4]
    for r in rows:
        assert r['I_hlodd'] <= r['I_udd']
        assert r['ratio'] == r['I_udd'] / r['I_hlodd']


def test_csv_deterministic(fig2):
    rows, _ = fig2
    a = write_csv(rows, FIG2_COLUMNS)
    b = write_csv(run_fig2(omega_c=5.0, n_max=4)[0], FIG2_COLUMNS)
    assert a == b
    assert '\r' not in a and a.endswith('\n')
    assert a.splitlines()[0] == ','.join(FIG2_COLUMNS)


def test_parallel_matches_serial():
    a = write_csv(run_fig2(omega_c=3.0, n_max=3)[0], FIG2_COLUMNS)
    b = write_csv(run_fig2(omega_c=3.0, n_max=3, jobs=2)[0], FIG2_COLUMNS)
    assert a == b


@pytest.mark.parametrize('which', ['fig1', 'fig2'])
def test_csv_roundtrip(which, fig1, fig2):
    rows = (fig1 if which == 'fig1' else fig2)[0]
    cols = FIG1_COLUMNS if which == 'fig1' else FIG2_COLUMNS
    back = read_csv(write_csv(rows, cols))
    assert back == rows


@pytest.mark.parametrize('which', ['fig1', 'fig2'])
def test_records_roundtrip(which, fig1, fig2):
    rows = (fig1 if which == 'fig1' else fig2)[0]
    cols = FIG1_COLUMNS if which == 'fig1' else FIG2_COLUMNS
    parsed = read_csv(write_csv(rows, cols))
    records = records_from_rows(parsed, which)
    via_json = [ExperimentRecord.from_json(r.to_json()) for r in records]
    assert via_json == records
    assert write_csv(rows_from_records(via_json, which), cols) == write_csv(rows, cols)


def test_fig2_self_consistency(fig2):
    rows, _ = fig2
    for r in rows:
        seq = make_sequence(r['deltas_hlodd'])
        i_opt = I_quadrature(seq, r['omega_c'] * r['t']).value
        i_udd = I_quadrature(udd(r['n']), r['omega_c'] * r['t']).value
        assert abs(i_udd / i_opt - r['ratio']) <= 1e-10 * r['ratio']


def test_record_validation():
    ok = baseline_record('UDD', 2, 5.0, 1.0)
    assert ok.deltas == udd(2).deltas.tolist()
    assert json.loads(ok.to_json())['method'] == 'UDD'
    with pytest.raises(ValueError):
        ExperimentRecord('x', 1, 1.0, 1.0, 'XDD', [0.5], 1.0)
    with pytest.raises(ValueError):
        ExperimentRecord('x', 2, 1.0, 1.0, 'UDD', [0.5], 1.0)
    with pytest.raises(ValueError):
        ExperimentRecord('x', 1, 1.0, 1.0, 'UDD', [0.5], -1.0)


def test_gnuplot_scripts_reference_csv():
    assert 'out.csv' in gnuplot_fig1('out.csv')
    assert 'out.csv' in gnuplot_fig2('out.csv')
    assert 'logscale y' in gnuplot_fig2('x.csv')

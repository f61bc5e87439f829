import json
import subprocess
import sys

import pytest

from ddopt.cli import main
from ddopt.harness import FIG2_COLUMNS, read_csv


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_optimize_json(capsys):
    code, out, _ = run(['optimize', '--n', '2', '--omega-c', '5', '--t', '1'], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec['converged'] and rec['minimum_verified']
    assert rec['deltas'] == pytest.approx([0.3430424195453593, 0.6569575804546407], abs=1e-8)


def test_optimize_uses_product(capsys):
    _, a, _ = run(['optimize', '--n', '1', '--omega-c', '5', '--t', '1'], capsys)
    _, b, _ = run(['optimize', '--n', '1', '--omega-c', '1', '--t', '5'], capsys)
    assert json.loads(a)['deltas'] == json.loads(b)['deltas']


@pytest.mark.parametrize('argv', [
    ['optimize', '--n', '2', '--omega-c', '0'],
    ['optimize', '--n', '2', '--omega-c', '-3'],
    ['optimize', '--n', 'two', '--omega-c', '1'],
    ['optimize', '--n', '0', '--omega-c', '1'],
    ['evaluate', '--deltas', '[0.75, 0.25]', '--omega-c', '1'],
    ['evaluate', '--deltas', '[0.5, 1.5]', '--omega-c', '1'],
    ['evaluate', '--deltas', '[0.5', '--omega-c', '1'],
    ['fig2', '--n', '0'],
])
def test_invalid_input_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code == 1


def test_nonmonotonic_message(capsys):
    code, _, err = run(['evaluate', '--deltas', '[0.75,0.25]', '--omega-c', '1', '--t', '1'], capsys)
    assert code == 1 and 'NonMonotonic' in err


def test_evaluate_free_evolution(capsys):
    code, out, _ = run(['evaluate', '--deltas', '[]', '--omega-c', '1', '--t', '1'], capsys)
    assert code == 0
    assert json.loads(out)['value'] == pytest.approx(0.4796234840011244, rel=1e-12)


def test_evaluate_both(capsys):
    code, out, _ = run(['evaluate', '--deltas', '[0.5]', '--omega-c', '1', '--t', '1',
                        '--method', 'both'], capsys)
    assert code == 0
    rec = json.loads(out)
    assert {r['method'] for r in rec['results']} == {'quadrature', 'series'}
    assert rec['discrepancy'] <= 1e-8 * rec['results'][0]['value']


def test_evaluate_files(tmp_path, capsys):
    good = tmp_path / 'seq.csv'
    good.write_text('j,delta_j\n1,0.25\n2,0.75\n')
    code, out, _ = run(['evaluate', '--file', str(good), '--omega-c', '2'], capsys)
    assert code == 0 and json.loads(out)['n'] == 2
    bad = tmp_path / 'seq.json'
    bad.write_text('[0.25,\n 0.5,]')
    code, _, err = run(['evaluate', '--file', str(bad), '--omega-c', '2'], capsys)
    assert code == 1 and 'seq.json:2:' in err


def test_evaluate_spectrum(tmp_path, capsys):
    spec = tmp_path / 'spec.csv'
    spec.write_text('omega,S\n' + ''.join(f'{w / 100},{w / 100}\n' for w in range(0, 501)))
    code, out, _ = run(['evaluate', '--deltas', '[0.5]', '--omega-c', '5',
                        '--spectrum', str(spec)], capsys)
    assert code == 0
    chi = json.loads(out)['value']
    _, out, _ = run(['evaluate', '--deltas', '[0.5]', '--omega-c', '5'], capsys)
    assert chi == pytest.approx(json.loads(out)['value'], rel=1e-8)
    spec.write_text('omega,S\n0,1\n1,-2\n')
    code, _, err = run(['evaluate', '--deltas', '[0.5]', '--omega-c', '5',
                        '--spectrum', str(spec)], capsys)
    assert code == 1 and 'InvalidSpectrum' in err


def test_baselines(capsys):
    code, out, _ = run(['udd', '--n', '3'], capsys)
    assert code == 0
    assert json.loads(out)['deltas'] == pytest.approx([0.14644660940672624, 0.5, 0.8535533905932737])
    code, out, _ = run(['pdd', '--n', '3', '--format', 'csv'], capsys)
    assert out == 'j,delta_j\n1,0.25\n2,0.5\n3,0.75\n'
    code, out, _ = run(['udd', '--n', '0', '--omega-c', '1'], capsys)
    assert json.loads(out)['I_value'] == pytest.approx(0.4796234840011244, rel=1e-12)


def test_fig2_csv_and_gnuplot(tmp_path, capsys):
    out = tmp_path / 'fig2.csv'
    code, _, _ = run(['fig2', '--n-max', '3', '--omega-c', '5', '--out', str(out), '--gnuplot'],
                     capsys)
    assert code == 0
    rows = read_csv(out.read_text())
    assert [r['n'] for r in rows] == [1, 2, 3]
    assert out.read_text().splitlines()[0] == ','.join(FIG2_COLUMNS)
    assert str(out) in (tmp_path / 'fig2.csv.gp').read_text()


def test_fig1_json(capsys):
    code, out, _ = run(['fig1', '--omega-c', '1', '--n', '2', '--format', 'json'], capsys)
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert {r['method'] for r in recs} == {'UDD', 'HLODD'}


def test_nonconvergence_exit_2(capsys):
    code, out, _ = run(['optimize', '--n', '4', '--omega-c', '5', '--max-iters', '1'], capsys)
    assert code == 2
    assert json.loads(out)['converged'] is False


def test_module_entry_point_and_logging(tmp_path):
    proc = subprocess.run([sys.executable, '-m', 'ddopt', 'optimize', '--n', '1',
                           '--omega-c', '2', '--out', str(tmp_path / 'r.json')],
                          capture_output=True, text=True, env={'DDOPT_LOG': 'info', 'PATH': ''})
    assert proc.returncode == 0
    assert proc.stdout == ''
    assert json.loads((tmp_path / 'r.json').read_text())['n'] == 1

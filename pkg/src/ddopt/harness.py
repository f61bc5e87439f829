"""Sweeps comparing UDD with optimised sequences, written as flat data.

``run_fig1`` tabulates pulse positions per cutoff and pulse count,
``run_fig2`` tabulates the objective against pulse count at one cutoff.
Rows are plain dicts; :func:`write_csv` renders them deterministically
(17 significant digits, ``\\n`` line endings) and
:func:`records_from_rows` / :func:`rows_from_records` convert them to and
from :class:`ExperimentRecord` without loss.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

import numpy as np

from .objective import I_quadrature
from .sequences import make_sequence, pdd, udd
from .solver import SolverConfig, solve_hlodd

__all__ = ['ExperimentRecord', 'FIG1_COLUMNS', 'FIG2_COLUMNS', 'run_fig1', 'run_fig2',
           'solve_cells', 'write_csv', 'read_csv', 'records_from_rows', 'rows_from_records',
           'gnuplot_fig1', 'gnuplot_fig2', 'baseline_record', 'fmt']

METHODS = ('UDD', 'PDD', 'HLODD')

FIG1_COLUMNS = ('omega_c', 't', 'n', 'j', 'delta_udd', 'delta_hlodd', 'abs_deviation',
                'I_udd', 'I_hlodd', 'residual_norm', 'converged')
FIG2_COLUMNS = ('omega_c', 't', 'n', 'I_udd', 'I_hlodd', 'ratio', 'residual_norm',
                'converged', 'deltas_hlodd')


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return '1' if x else '0'
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), '.17g')


def _timestamp():
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


@dataclass
class ExperimentRecord:
    experiment_id: str
    n: int
    omega_c: float
    t: float
    method: str
    deltas: list
    I_value: float
    residual_norm: float | None = None
    converged: bool | None = None
    timestamp: str = ''

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f'method must be one of {METHODS}')
        if not self.I_value >= 0:
            raise ValueError('I_value must be nonnegative')
        make_sequence(self.deltas)
        if len(self.deltas) != self.n:
            raise ValueError('deltas length does not match n')
        if not self.timestamp:
            self.timestamp = _timestamp()

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> 'ExperimentRecord':
        return cls(**json.loads(text))


def _solve_cell(args):
    n, omega_c, t, config = args
    return (omega_c, n), solve_hlodd(n, omega_c * t, config)


def solve_cells(cells, t=1.0, config=None, jobs=1):
    """Solve every ``(omega_c, n)`` cell; returns a dict keyed by the cell."""
    config = config or SolverConfig()
    work = [(n, float(w), float(t), config) for w, n in cells]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(_solve_cell, work))
    else:
        out = [_solve_cell(a) for a in work]
    return dict(out)


def run_fig1(omega_cs=(1.0, 5.0, 10.0), ns=(2, 5), t=1.0, config=None, jobs=1):
    """Pulse positions of UDD and the optimum for each cutoff and pulse count.

    One row per pulse, sorted by ``(omega_c, n, j)``.
    """
    cells = sorted({(float(w), int(n)) for w in omega_cs for n in ns})
    results = solve_cells(cells, t, config, jobs)
    rows = []
    for w, n in cells:
        res = results[(w, n)]
        base = udd(n)
        i_udd = I_quadrature(base, w * t).value
        for j, (du, dh) in enumerate(zip(base.deltas, res.sequence.deltas), start=1):
            rows.append({'omega_c': w, 't': float(t), 'n': n, 'j': j,
                         'delta_udd': float(du), 'delta_hlodd': float(dh),
                         'abs_deviation': abs(float(dh) - float(du)),
                         'I_udd': i_udd, 'I_hlodd': float(res.objective.value),
                         'residual_norm': float(res.residual_norm),
                         'converged': bool(res.converged and res.minimum_verified)})
    return rows, results


def run_fig2(omega_c=5.0, n_max=10, t=1.0, config=None, jobs=1):
    """Objective of UDD and of the optimum for ``n = 1..n_max``."""
    cells = [(float(omega_c), n) for n in range(1, n_max + 1)]
    results = solve_cells(cells, t, config, jobs)
    rows = []
    for w, n in cells:
        res = results[(w, n)]
        i_udd = I_quadrature(udd(n), w * t).value
        i_opt = float(res.objective.value)
        rows.append({'omega_c': w, 't': float(t), 'n': n, 'I_udd': i_udd, 'I_hlodd': i_opt,
                     'ratio': i_udd / i_opt if i_opt > 0 else math.inf,
                     'residual_norm': float(res.residual_norm),
                     'converged': bool(res.converged and res.minimum_verified),
                     'deltas_hlodd': [float(x) for x in res.sequence.deltas]})
    return rows, results


def _cell(value):
    if isinstance(value, list):
        return ' '.join(fmt(x) for x in value)
    return fmt(value)


def write_csv(rows, columns, stream=None) -> str:
    """Render rows as CSV text; also written to ``stream`` if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row[c]) for c in columns])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


_INT_COLS = {'n', 'j'}
_BOOL_COLS = {'converged'}
_LIST_COLS = {'deltas_hlodd'}


def read_csv(text: str) -> list:
    rows = []
    for raw in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in raw.items():
            if k in _INT_COLS:
                row[k] = int(v)
            elif k in _BOOL_COLS:
                row[k] = v == '1'
            elif k in _LIST_COLS:
                row[k] = [float(x) for x in v.split()]
            else:
                row[k] = float(v)
        rows.append(row)
    return rows


def _exp_id(fig, w, t, n, method):
    return f'{fig}-wc{fmt(w)}-t{fmt(t)}-n{n}-{method}'


def records_from_rows(rows, fig: str) -> list:
    """Group fig1 / fig2 rows into UDD and HLODD :class:`ExperimentRecord` pairs."""
    records = []
    if fig == 'fig1':
        groups = {}
        for row in rows:
            groups.setdefault((row['omega_c'], row['t'], row['n']), []).append(row)
        for (w, t, n), grp in groups.items():
            grp = sorted(grp, key=lambda r: r['j'])
            records.append(ExperimentRecord(_exp_id(fig, w, t, n, 'UDD'), n, w, t, 'UDD',
                                            [r['delta_udd'] for r in grp], grp[0]['I_udd']))
            records.append(ExperimentRecord(_exp_id(fig, w, t, n, 'HLODD'), n, w, t, 'HLODD',
                                            [r['delta_hlodd'] for r in grp], grp[0]['I_hlodd'],
                                            grp[0]['residual_norm'], grp[0]['converged']))
    elif fig == 'fig2':
        for row in rows:
            w, t, n = row['omega_c'], row['t'], row['n']
            records.append(ExperimentRecord(_exp_id(fig, w, t, n, 'UDD'), n, w, t, 'UDD',
                                            udd(n).deltas.tolist(), row['I_udd']))
            records.append(ExperimentRecord(_exp_id(fig, w, t, n, 'HLODD'), n, w, t, 'HLODD',
                                            list(row['deltas_hlodd']), row['I_hlodd'],
                                            row['residual_norm'], row['converged']))
    else:
        raise ValueError(f'unknown figure {fig!r}')
    return records


def rows_from_records(records, fig: str) -> list:
    """Inverse of :func:`records_from_rows`."""
    pairs = {}
    for rec in records:
        pairs.setdefault((rec.omega_c, rec.t, rec.n), {})[rec.method] = rec
    rows = []
    for (w, t, n), pair in sorted(pairs.items()):
        u, h = pair['UDD'], pair['HLODD']
        if fig == 'fig1':
            for j, (du, dh) in enumerate(zip(u.deltas, h.deltas), start=1):
                rows.append({'omega_c': w, 't': t, 'n': n, 'j': j, 'delta_udd': du,
                             'delta_hlodd': dh, 'abs_deviation': abs(dh - du),
                             'I_udd': u.I_value, 'I_hlodd': h.I_value,
                             'residual_norm': h.residual_norm, 'converged': h.converged})
        else:
            rows.append({'omega_c': w, 't': t, 'n': n, 'I_udd': u.I_value, 'I_hlodd': h.I_value,
                         'ratio': u.I_value / h.I_value if h.I_value > 0 else math.inf,
                         'residual_norm': h.residual_norm, 'converged': h.converged,
                         'deltas_hlodd': list(h.deltas)})
    return rows


def gnuplot_fig1(csv_path: str) -> str:
    return f"""# pulse positions, UDD (open) vs optimised (filled)
set datafile separator ','
set key autotitle columnhead
set xlabel 'pulse index j'
set ylabel 'delta_j'
plot '{csv_path}' using 4:5 with points pt 6 title 'UDD', \\
     '' using 4:6 with points pt 7 title 'HLODD'
"""


def gnuplot_fig2(csv_path: str) -> str:
    return f"""# objective versus pulse number
set datafile separator ','
set logscale y
set xlabel 'n'
set ylabel 'I_n'
plot '{csv_path}' using 3:4 with linespoints title 'UDD', \\
     '' using 3:5 with linespoints title 'HLODD'
"""


def baseline_record(method: str, n: int, omega_c: float, t: float) -> ExperimentRecord:
    seq = udd(n) if method == 'UDD' else pdd(n)
    value = I_quadrature(seq, omega_c * t).value
    return ExperimentRecord(f'{method.lower()}-wc{fmt(omega_c)}-t{fmt(t)}-n{n}', n, omega_c, t,
                            method, seq.deltas.tolist(), value)

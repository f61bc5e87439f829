"""Command-line front end: ``ddopt {optimize,evaluate,fig1,fig2,udd,pdd}``.

Results go to standard output (or ``--out``); diagnostics go to standard
error at the level named by ``DDOPT_LOG`` (error, info or debug).

Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import harness
from .errors import InvalidSpectrum, NumericalFailure, SequenceError
from .objective import (SERIES, CutoffSpec, I_quadrature, I_series, chi,
                        load_spectrum_csv)
from .sequences import from_csv, make_sequence, pdd, to_csv, udd
from .solver import SolverConfig, solve_hlodd

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 1, 2

log = logging.getLogger('ddopt')


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f'{self.prog}: error: {message}\n')


def _positive(name):
    def conv(text):
        try:
            x = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f'{name} must be a number, got {text!r}')
        if not (x > 0 and math.isfinite(x)):
            raise argparse.ArgumentTypeError(f'{name} must be positive')
        return x
    return conv


def _count(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'n must be an integer, got {text!r}')
    if n < 0:
        raise argparse.ArgumentTypeError('n must be nonnegative')
    return n


def _common(p, omega_default=None, multi_omega=False):
    if multi_omega:
        p.add_argument('--omega-c', type=_positive('omega_c'), nargs='+', default=omega_default)
    else:
        p.add_argument('--omega-c', type=_positive('omega_c'), required=omega_default is None,
                       default=omega_default)
    p.add_argument('--t', type=_positive('t'), default=1.0)
    p.add_argument('--out', type=Path)
    p.add_argument('--format', choices=('csv', 'json'), default=None)


def _solver_flags(p):
    p.add_argument('--tol', type=_positive('tol'), default=1e-10, help='residual tolerance')
    p.add_argument('--max-iters', type=int, default=200)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--jobs', type=int, default=1)


def build_parser():
    parser = _Parser(prog='ddopt', description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    p = sub.add_parser('optimize', help='optimal pulse times for n pulses')
    p.add_argument('--n', type=_count, required=True)
    _common(p)
    _solver_flags(p)

    p = sub.add_parser('evaluate', help='objective of a given sequence')
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument('--deltas', help='JSON array of fractional pulse times')
    src.add_argument('--file', type=Path, help='JSON array or CSV (j,delta_j) file')
    p.add_argument('--method', choices=('quadrature', 'series', 'both'), default='quadrature')
    p.add_argument('--spectrum', type=Path,
                   help='two-column omega,S CSV; evaluates chi instead of the ohmic objective')
    p.add_argument('--S0', type=_positive('S0'), default=1.0)
    _common(p, omega_default=None)

    p = sub.add_parser('fig1', help='pulse positions versus cutoff')
    p.add_argument('--n', type=_count, nargs='+', default=[2, 5])
    _common(p, omega_default=[1.0, 5.0, 10.0], multi_omega=True)
    p.add_argument('--gnuplot', action='store_true')
    _solver_flags(p)

    p = sub.add_parser('fig2', help='objective versus pulse number')
    p.add_argument('--n', '--n-max', dest='n_max', type=_count, default=10)
    _common(p, omega_default=5.0)
    p.add_argument('--gnuplot', action='store_true')
    _solver_flags(p)

    for name in ('udd', 'pdd'):
        p = sub.add_parser(name, help=f'{name.upper()} pulse times')
        p.add_argument('--n', type=_count, required=True)
        p.add_argument('--omega-c', type=_positive('omega_c'), default=None)
        p.add_argument('--t', type=_positive('t'), default=1.0)
        p.add_argument('--out', type=Path)
        p.add_argument('--format', choices=('csv', 'json'), default='json')
    return parser


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith('\n'):
            sys.stdout.write('\n')
    else:
        with open(out, 'w', newline='\n') as fh:
            fh.write(text)


def _config(args):
    return SolverConfig(residual_tol=args.tol, max_iters=args.max_iters, seed=args.seed)


def _load_sequence(args):
    if args.deltas is not None:
        try:
            data = json.loads(args.deltas)
        except json.JSONDecodeError as exc:
            raise UsageError(f'--deltas: {exc.msg} at line {exc.lineno} column {exc.colno}')
        if not isinstance(data, list):
            raise UsageError('--deltas: expected a JSON array')
        return make_sequence(data)
    path = args.file
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f'{path}: {exc.strerror}')
    if path.suffix.lower() == '.csv':
        try:
            return from_csv(text)
        except (KeyError, ValueError) as exc:
            if isinstance(exc, SequenceError):
                raise
            raise UsageError(f'{path}: malformed CSV: {exc}')
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f'{path}:{exc.lineno}:{exc.colno}: {exc.msg}')
    if not isinstance(data, list):
        raise UsageError(f'{path}:1:1: expected a JSON array')
    for k, x in enumerate(data):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise UsageError(f'{path}: element {k} is not a number: {x!r}')
    return make_sequence(data)


def cmd_optimize(args):
    if args.n < 1:
        raise UsageError('n must be at least 1')
    cut = CutoffSpec(args.omega_c, args.t)
    res = solve_hlodd(args.n, cut.z_c, _config(args))
    rec = res.to_record()
    rec.update(omega_c=args.omega_c, t=args.t)
    _emit(json.dumps(rec, indent=2), args.out)
    ok = res.converged and res.minimum_verified
    if not ok:
        log.error('not converged: %s', res.diagnostics.get('verification', {}).get('reason'))
    return EXIT_OK if ok else EXIT_NONCONVERGED


def cmd_evaluate(args):
    seq = _load_sequence(args)
    cut = CutoffSpec(args.omega_c, args.t)
    if args.spectrum is not None:
        spectrum = load_spectrum_csv(args.spectrum, S0=args.S0)
        rep = chi(seq, spectrum, args.t)
        out = rep.to_record(seq.n, cut.z_c)
        out['quantity'] = 'chi'
        _emit(json.dumps(out, indent=2), args.out)
        return EXIT_OK
    recs = []
    if args.method in ('quadrature', 'both'):
        recs.append(I_quadrature(seq, cut.z_c).to_record(seq.n, cut.z_c))
    if args.method in ('series', 'both'):
        recs.append(I_series(seq, cut.z_c).to_record(seq.n, cut.z_c))
    if args.method == 'both':
        out = {'n': seq.n, 'z_c': cut.z_c, 'omega_c': args.omega_c, 't': args.t,
               'results': recs, 'discrepancy': abs(recs[0]['value'] - recs[1]['value'])}
    else:
        out = recs[0]
        out.update(omega_c=args.omega_c, t=args.t)
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK


def _figure(args, rows, results, columns, fig, script):
    fmt_ = args.format or 'csv'
    if fmt_ == 'csv':
        text = harness.write_csv(rows, columns)
    else:
        text = '\n'.join(r.to_json() for r in harness.records_from_rows(rows, fig)) + '\n'
    _emit(text, args.out)
    if args.gnuplot:
        target = str(args.out) if args.out else f'{fig}.csv'
        plot = script(target)
        if args.out:
            Path(str(args.out) + '.gp').write_text(plot)
        else:
            sys.stderr.write(plot)
    bad = [k for k, r in sorted(results.items()) if not (r.converged and r.minimum_verified)]
    for w, n in bad:
        log.error('omega_c=%g n=%d did not converge to a verified minimum', w, n)
    return EXIT_NONCONVERGED if bad else EXIT_OK


def cmd_fig1(args):
    rows, results = harness.run_fig1(args.omega_c, args.n, args.t, _config(args), args.jobs)
    return _figure(args, rows, results, harness.FIG1_COLUMNS, 'fig1', harness.gnuplot_fig1)


def cmd_fig2(args):
    if args.n_max < 1:
        raise UsageError('n-max must be at least 1')
    rows, results = harness.run_fig2(args.omega_c, args.n_max, args.t, _config(args), args.jobs)
    return _figure(args, rows, results, harness.FIG2_COLUMNS, 'fig2', harness.gnuplot_fig2)


def cmd_baseline(args):
    seq = udd(args.n) if args.command == 'udd' else pdd(args.n)
    if args.format == 'csv':
        text = to_csv(seq)
    else:
        out = {'n': seq.n, 'deltas': seq.deltas.tolist()}
        if args.omega_c is not None:
            out['I_value'] = I_quadrature(seq, args.omega_c * args.t).value
        text = json.dumps(out)
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {'optimize': cmd_optimize, 'evaluate': cmd_evaluate, 'fig1': cmd_fig1,
            'fig2': cmd_fig2, 'udd': cmd_baseline, 'pdd': cmd_baseline}


def _setup_logging():
    level = os.environ.get('DDOPT_LOG', 'error').lower()
    levels = {'error': logging.ERROR, 'info': logging.INFO, 'debug': logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR), stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, SequenceError, InvalidSpectrum, ValueError) as exc:
        name = type(exc).__name__
        prefix = '' if name in ('UsageError', 'ValueError') else f'{name}: '
        sys.stderr.write(f'ddopt {args.command}: {prefix}{exc}\n')
        return EXIT_INVALID
    except NumericalFailure as exc:
        sys.stderr.write(f'ddopt {args.command}: {exc}\n')
        return EXIT_NONCONVERGED


if __name__ == '__main__':
    sys.exit(main())

"""Entire cosine integral ``Cin(x) = int_0^x (1 - cos t) / t dt``."""
from __future__ import annotations

import numpy as np

from .errors import NumericalFailure

__all__ = ['EULER_GAMMA', 'cin', 'cin_series', 'cin_asymptotic', 'cosine_integral']

EULER_GAMMA = 0.5772156649015329

_TINY = 1e-300


def cin_series(x, max_terms=32, rtol=1e-16):
    """Power series ``sum_{m>=1} (-1)**(m+1) x**(2m) / ((2m) (2m)!)``.

    Raises :class:`NumericalFailure` if the terms have not dropped below
    ``rtol * |partial sum|`` after ``max_terms`` terms.
    """
    x = np.asarray(x, dtype=float)
    x2 = x * x
    power = np.ones_like(x)   # x**(2m) / (2m)!
    total = np.zeros_like(x)
    done = x2 == 0.0
    for m in range(1, max_terms + 1):
        power = power * x2 / ((2 * m - 1) * (2 * m))
        term = power / (2 * m)
        total = total + (term if m % 2 else -term)
        done = done | (term <= rtol * np.abs(total))
        if np.all(done):
            return total
    raise NumericalFailure(f'Cin series not converged after {max_terms} terms '
                           f'(max |x| = {np.max(np.abs(x)):.6g})',
                           estimate=total, error=float(np.max(term)))


def _e1_imaginary(x, max_iter=200, eps=4 * np.finfo(float).eps):
    """``E1(i x)`` for ``x > 0`` by continued fraction (modified Lentz)."""
    b = 1.0 + 1j * x
    c = np.full_like(b, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    for k in range(1, max_iter):
        a = -float(k * k)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        step = c * d
        h = h * step
        if np.all(np.abs(step - 1.0) < eps):
            return np.exp(-1j * x) * h
    raise NumericalFailure('continued fraction for E1(ix) did not converge')


def cosine_integral(x):
    """``Ci(x)`` for ``x > 0`` via the continued fraction; intended for x >~ 2."""
    x = np.asarray(x, dtype=float)
    return -_e1_imaginary(x).real


def cin_asymptotic(x):
    """``gamma + ln|x| - Ci(|x|)``; accurate for large ``|x|``."""
    ax = np.abs(np.asarray(x, dtype=float))
    return EULER_GAMMA + np.log(ax) - cosine_integral(ax)


def cin(x, large_arg_switch=8.0, max_terms=32):
    """Entire cosine integral, even in ``x``.

    Uses the power series up to ``|x| = large_arg_switch`` and
    ``gamma + ln|x| - Ci(|x|)`` beyond it.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    out = np.empty_like(ax)
    small = ax <= large_arg_switch
    if np.any(small):
        out[small] = cin_series(ax[small], max_terms=max_terms)
    if np.any(~small):
        out[~small] = cin_asymptotic(ax[~small])
    return out if out.ndim else float(out)

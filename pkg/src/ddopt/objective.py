"""Decoherence objective for an ohmic bath with a sharp cutoff.

For a sequence with signed weights ``c_j`` the objective is

    I_n(z_c) = int_0^{z_c} |y_n(z)|**2 / z dz.

Two independent evaluations are provided: adaptive quadrature of the
integrand, and the closed pair sum

    I_n = -sum_{i<j} 2 c_i c_j Cin((delta_j - delta_i) z_c),

obtained by pairing the ``(i, j)`` and ``(j, i)`` terms of the power
series in ``z_c`` (the odd orders cancel and the even orders sum to
``Cin``). The literal series is available as :func:`I_series_literal`
for checking that reduction. The gradient and Hessian with respect to
the pulse times are closed form.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .errors import InvalidSpectrum, NumericalFailure
from .filter import magnitude_squared
from .sequences import PulseSequence
from .special import EULER_GAMMA, cin

__all__ = ['CutoffSpec', 'SpectrumModel', 'ObjectiveReport', 'SeriesParams', 'integrand',
           'I_quadrature', 'I_series', 'I_series_literal', 'gradient', 'hessian', 'chi',
           'load_spectrum_csv', 'QUADRATURE', 'SERIES']

QUADRATURE = 'quadrature'
SERIES = 'series'

_EPS = np.finfo(float).eps


def _accept_bound(value):
    return max(1e-10, 1e-10 * abs(value))


@dataclass(frozen=True)
class CutoffSpec:
    omega_c: float
    t: float

    def __post_init__(self):
        if not (self.omega_c > 0 and math.isfinite(self.omega_c)):
            raise ValueError('omega_c must be positive')
        if not (self.t > 0 and math.isfinite(self.t)):
            raise ValueError('t must be positive')

    @property
    def z_c(self) -> float:
        return self.omega_c * self.t


@dataclass(frozen=True)
class SpectrumModel:
    """Noise spectral density ``S(omega)``.

    ``kind='ohmic'`` is ``S0 * omega`` below ``omega_c`` and zero above.
    ``kind='tabulated'`` is ``S0`` times a linear interpolation of
    ``table`` (rows of ``(omega, S)``), zero outside the tabulated range.
    """

    kind: str
    S0: float = 1.0
    omega_c: float | None = None
    table: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.S0 > 0:
            raise InvalidSpectrum('S0 must be positive')
        if self.kind == 'ohmic':
            if self.omega_c is None or not self.omega_c > 0:
                raise InvalidSpectrum('ohmic spectrum needs omega_c > 0')
        elif self.kind == 'tabulated':
            tab = np.asarray(self.table, dtype=float)
            if tab.ndim != 2 or tab.shape[1] != 2 or tab.shape[0] < 2:
                raise InvalidSpectrum('table must have at least two (omega, S) rows')
            if not np.all(np.isfinite(tab)):
                raise InvalidSpectrum('table contains non-finite entries')
            if np.any(tab[:, 0] < 0) or np.any(np.diff(tab[:, 0]) <= 0):
                raise InvalidSpectrum('table frequencies must be nonnegative and increasing')
            if np.any(tab[:, 1] < 0):
                raise InvalidSpectrum('spectrum samples must be nonnegative')
            tab.setflags(write=False)
            object.__setattr__(self, 'table', tab)
        else:
            raise InvalidSpectrum(f'unknown spectrum kind {self.kind!r}')

    @classmethod
    def ohmic(cls, omega_c, S0=1.0):
        return cls('ohmic', S0=S0, omega_c=omega_c)

    @classmethod
    def tabulated(cls, omega, S, S0=1.0):
        return cls('tabulated', S0=S0, table=np.column_stack((omega, S)))

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        if self.kind == 'ohmic':
            return np.where((omega >= 0) & (omega <= self.omega_c), self.S0 * omega, 0.0)
        w, s = self.table[:, 0], self.table[:, 1]
        return self.S0 * np.interp(omega, w, s, left=0.0, right=0.0)


def load_spectrum_csv(path, S0=1.0) -> SpectrumModel:
    """Read a two-column ``omega,S`` CSV (header row optional)."""
    rows = []
    with open(path, newline='') as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not ''.join(row).strip():
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if lineno == 1 and not rows:
                    continue
                raise InvalidSpectrum(f'{path}:{lineno}: expected two numbers, got {row!r}')
    if not rows:
        raise InvalidSpectrum(f'{path}: no data rows')
    tab = np.array(rows)
    return SpectrumModel.tabulated(tab[:, 0], tab[:, 1], S0=S0)


@dataclass(frozen=True)
class ObjectiveReport:
    value: float
    method: str
    error_estimate: float = 0.0
    gradient: np.ndarray | None = None

    def to_record(self, n, z_c):
        return {'n': int(n), 'z_c': float(z_c), 'method': self.method,
                'value': float(self.value), 'error_estimate': float(self.error_estimate)}

    def to_json(self, n, z_c):
        return json.dumps(self.to_record(n, z_c))


@dataclass(frozen=True)
class SeriesParams:
    k_max: int = 64
    gamma: float = EULER_GAMMA
    large_arg_switch: float = 8.0

    def __post_init__(self):
        if self.k_max < 8:
            raise ValueError('k_max must be at least 8')
        if not self.large_arg_switch > 0:
            raise ValueError('large_arg_switch must be positive')


def integrand(seq: PulseSequence, z):
    """``|y_n(z)|**2 / z`` with the removable point ``z = 0`` set to 0."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError('integrand is defined for z >= 0 only')
    m2 = magnitude_squared(seq, z)
    with np.errstate(divide='ignore', invalid='ignore'):
        out = np.where(z > 0, m2 / np.where(z > 0, z, 1.0), 0.0)
    return out if out.ndim else float(out)


def _integrand_noise(seq: PulseSequence):
    """Rounding bound for :func:`integrand`.

    Each term of ``y`` carries about ``|c_j| (2 + z delta_j)`` ulps, so
    ``|y|**2`` is off by ``2 |y| e + e**2``.
    """
    c = np.abs(seq.coefficients())
    d = seq.full()

    def noise(z):
        e = _EPS * (2.0 * c.sum() + np.multiply.outer(z, d) @ c)
        y = np.sqrt(magnitude_squared(seq, z))
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(z > 0, (2.0 * y * e + e * e) / np.where(z > 0, z, 1.0), 0.0)
    return noise


def _check_zc(z_c):
    if not (z_c > 0 and math.isfinite(z_c)):
        raise ValueError('z_c must be positive and finite')


def I_quadrature(seq: PulseSequence, z_c: float, epsabs=0.0, epsrel=1e-12,
                 limit=10_000) -> ObjectiveReport:
    """Objective by adaptive Gauss-Kronrod quadrature on ``(0, z_c]``.

    The default target is relative 1e-12. If the panel budget runs out the
    result is accepted when the error estimate is below
    ``max(1e-10, 1e-10 * value)``; otherwise :class:`NumericalFailure`.
    """
    _check_zc(z_c)
    f = lambda z: integrand(seq, z)  # noqa: E731
    # the integrand's fastest oscillation has period >= 2 pi
    panels = max(1, math.ceil(z_c / 4.0))
    res = quadrature.integrate(f, 0.0, z_c, epsabs=epsabs, epsrel=epsrel, limit=limit,
                               initial_panels=panels, noise=_integrand_noise(seq),
                               accept_error=_accept_bound)
    return ObjectiveReport(max(res.value, 0.0), QUADRATURE, res.error)


def _pair_terms(seq: PulseSequence):
    d = seq.full()
    c = seq.coefficients()
    i, j = np.triu_indices(d.size, k=1)
    return d[j] - d[i], 2.0 * c[i] * c[j]


def I_series(seq: PulseSequence, z_c: float, params: SeriesParams = SeriesParams()) -> ObjectiveReport:
    """Objective from the resummed series, ``-sum_{i<j} 2 c_i c_j Cin(...)``.

    The error estimate is the rounding bound of the pair sum. A negative
    result (possible only at rounding level) is clipped to 0 and the
    clipped amount is folded into the estimate.
    """
    _check_zc(z_c)
    gaps, w = _pair_terms(seq)
    if gaps.size == 0:
        return ObjectiveReport(0.0, SERIES, 0.0)
    try:
        cins = cin(gaps * z_c, large_arg_switch=params.large_arg_switch,
                   max_terms=params.k_max // 2)
    except NumericalFailure as exc:
        raise NumericalFailure(f'series truncated at k_max={params.k_max}: {exc}',
                               estimate=exc.estimate, error=exc.error) from exc
    cins = np.atleast_1d(cins)
    terms = -w * cins
    value = math.fsum(terms.tolist())
    err = 8 * _EPS * float(np.abs(terms).sum())
    if value < 0:
        err += -value
        value = 0.0
    return ObjectiveReport(value, SERIES, err)


def I_series_literal(seq: PulseSequence, z_c: float, k_max: int = 64) -> complex:
    """Truncated triple sum over ``(i, j, k)`` exactly as the raw series.

    ``sum_{i,j} sum_{k=1}^{k_max} c_i c_j D_ij**k / (k! k) z_c**k`` with
    ``D_ij = i (delta_i - delta_j)``. Returned complex so that the
    cancellation of the imaginary part can be observed. Only usable for
    moderate ``z_c`` (terms grow like ``z_c**k / k!``).
    """
    d = seq.full()
    c = seq.coefficients()
    D = 1j * (d[:, None] - d[None, :])
    cc = np.outer(c, c)
    total = 0j
    power = np.ones_like(D)
    for k in range(1, k_max + 1):
        power = power * D * z_c / k          # (D z_c)**k / k!
        total += np.sum(cc * power) / k
    return complex(total)


def _differences(seq: PulseSequence):
    """Pulse-by-all difference matrix ``delta_m - delta_i`` (rows m = 1..n)
    and the matching ``2 c_m c_i`` with the ``i == m`` entries zeroed."""
    d = seq.full()
    c = seq.coefficients()
    n = seq.n
    diff = d[1:n + 1, None] - d[None, :]
    w = 2.0 * c[1:n + 1, None] * c[None, :]
    w[np.arange(n), np.arange(1, n + 1)] = 0.0
    diff[np.arange(n), np.arange(1, n + 1)] = 1.0
    return diff, w


def gradient(seq: PulseSequence, z_c: float) -> np.ndarray:
    """``dI_n/d delta_m`` for ``m = 1..n``.

    Each term is ``2 c_m c_i (cos((delta_m - delta_i) z_c) - 1) / (delta_m - delta_i)``
    with ``cos(u) - 1`` written as ``-2 sin(u/2)**2``.
    """
    if seq.n == 0:
        return np.zeros(0)
    diff, w = _differences(seq)
    s = np.sin(0.5 * z_c * diff)
    return np.sum(w * (-2.0 * s * s / diff), axis=1)


def hessian(seq: PulseSequence, z_c: float) -> np.ndarray:
    """Analytic ``n x n`` Hessian of ``I_n``, i.e. the Jacobian of :func:`gradient`."""
    n = seq.n
    if n == 0:
        return np.zeros((0, 0))
    diff, w = _differences(seq)
    u = z_c * diff
    s = np.sin(0.5 * u)
    # derivative of -2 sin^2(u/2)/d with respect to d
    fprime = 2.0 * s * s / (diff * diff) - z_c * np.sin(u) / diff
    F = w * fprime
    H = -F[:, 1:n + 1].copy()
    H[np.arange(n), np.arange(n)] = F.sum(axis=1)
    return 0.5 * (H + H.T)


def chi(seq: PulseSequence, spectrum: SpectrumModel, t: float, epsrel=1e-12) -> ObjectiveReport:
    """Overlap integral ``int_0^inf S(omega)/omega**2 |y_n(omega t)|**2 d omega``.

    For the ohmic spectrum this is ``S0 * I_n(omega_c t)`` exactly. For a
    tabulated spectrum the integral runs over the tabulated support with
    the table nodes as break points.
    """
    if not (t > 0 and math.isfinite(t)):
        raise ValueError('t must be positive')
    if spectrum.kind == 'ohmic':
        rep = I_quadrature(seq, spectrum.omega_c * t, epsrel=epsrel)
        return ObjectiveReport(spectrum.S0 * rep.value, QUADRATURE, spectrum.S0 * rep.error_estimate)
    w = spectrum.table[:, 0]
    c = seq.coefficients()
    slope0 = t * float(c @ seq.full())   # y(omega t) ~ i omega * slope0 near 0

    def f(omega):
        m2 = magnitude_squared(seq, omega * t)
        with np.errstate(divide='ignore', invalid='ignore'):
            ratio = np.where(omega > 0, m2 / np.where(omega > 0, omega * omega, 1.0), slope0 ** 2)
        return spectrum(omega) * ratio

    res = quadrature.integrate(f, float(w[0]), float(w[-1]), epsrel=epsrel, points=w[1:-1],
                               accept_error=_accept_bound)
    return ObjectiveReport(max(res.value, 0.0), QUADRATURE, res.error)

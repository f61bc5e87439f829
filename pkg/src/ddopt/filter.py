"""Filter function of an instantaneous pi-pulse sequence.

With signed weights ``c_j = 2**q_j (-1)**j`` the filter function is

    y_n(z) = sum_{j=0}^{n+1} c_j exp(i z delta_j)

and ``|y_n(z)|**2`` weights the noise at dimensionless frequency
``z = omega * t``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sequences import PulseSequence

__all__ = ['FilterValue', 'filter_value', 'filter_response', 'magnitude_squared',
           'magnitude_squared_sumform', 'dc_identity_check']


@dataclass(frozen=True)
class FilterValue:
    z: float
    value: complex
    magnitude_squared: float


def filter_response(seq: PulseSequence, z) -> np.ndarray:
    """Complex ``y_n(z)``, vectorised over ``z``."""
    z = np.asarray(z, dtype=float)
    phase = np.multiply.outer(z, seq.full())
    return np.exp(1j * phase) @ seq.coefficients()


def magnitude_squared(seq: PulseSequence, z) -> np.ndarray:
    y = filter_response(seq, z)
    return y.real ** 2 + y.imag ** 2


def filter_value(seq: PulseSequence, z: float) -> FilterValue:
    if not np.isfinite(z):
        raise ValueError('z must be finite')
    y = complex(filter_response(seq, float(z)))
    return FilterValue(float(z), y, y.real ** 2 + y.imag ** 2)


def magnitude_squared_sumform(seq: PulseSequence, z) -> np.ndarray:
    """``|y_n(z)|**2`` from the double sum over pulse pairs.

    Evaluates ``sum_{i,j} c_i c_j cos(z (delta_i - delta_j))``; the
    imaginary parts cancel pairwise. Kept independent of
    :func:`filter_response` so the two can check each other.
    """
    z = np.asarray(z, dtype=float)
    d = seq.full()
    c = seq.coefficients()
    diff = d[:, None] - d[None, :]
    cc = np.outer(c, c)
    # sum(cc) == 0, so subtract it as cos(.) - 1 = -2 sin^2(./2)
    s = np.sin(0.5 * np.multiply.outer(z, diff))
    return -2.0 * np.einsum('...ij,ij->...', s * s, cc)


def dc_identity_check(n: int) -> int:
    """Exact integer value of ``sum_{i,j} 2**(q_i+q_j) (-1)**(i+j)``; always 0."""
    if n < 0:
        raise ValueError('n must be nonnegative')
    coeffs = [(-1) ** j * (1 if j in (0, n + 1) else 2) for j in range(n + 2)]
    return sum(ci * cj for ci in coeffs for cj in coeffs)

"""Pulse-timing sequences and the UDD / PDD baselines.

A sequence of ``n`` instantaneous pi pulses is stored as the fractional
times ``delta_j = t_j / t`` for ``j = 1..n``. The fixed endpoints
``delta_0 = 0`` and ``delta_{n+1} = 1`` are reachable through
:meth:`PulseSequence.full` and :meth:`PulseSequence.delta` so that sums
over ``j = 0..n+1`` can be written directly.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import NonMonotonic, OutOfRange, TooClose

__all__ = ['EPS_SEP', 'PulseSequence', 'make_sequence', 'udd', 'pdd', 'reverse',
           'empty', 'from_json', 'to_json', 'from_csv', 'to_csv']

#: Minimum allowed gap between neighbouring pulses (and the endpoints).
EPS_SEP = 1e-9


@dataclass(frozen=True, eq=False)
class PulseSequence:
    """Validated, immutable set of fractional pulse times.

    Use :func:`make_sequence` (or :func:`udd` / :func:`pdd`) rather than
    calling the constructor with unchecked data.
    """

    deltas: np.ndarray
    _full: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        d = np.array(self.deltas, dtype=float).reshape(-1)
        d.setflags(write=False)
        full = np.concatenate(([0.0], d, [1.0]))
        full.setflags(write=False)
        object.__setattr__(self, 'deltas', d)
        object.__setattr__(self, '_full', full)

    @property
    def n(self) -> int:
        return self.deltas.size

    def full(self) -> np.ndarray:
        """Times ``delta_0 .. delta_{n+1}`` including both endpoints."""
        return self._full

    def delta(self, j: int) -> float:
        if not 0 <= j <= self.n + 1:
            raise IndexError(f'j={j} outside 0..{self.n + 1}')
        return float(self._full[j])

    def weights(self) -> np.ndarray:
        """Exponents ``q_j``: 0 at the endpoints, 1 for every pulse."""
        q = np.ones(self.n + 2, dtype=int)
        q[0] = q[-1] = 0
        return q

    def coefficients(self) -> np.ndarray:
        """Signed weights ``2**q_j * (-1)**j`` for ``j = 0..n+1``."""
        j = np.arange(self.n + 2)
        return np.where(j % 2 == 0, 1.0, -1.0) * 2.0 ** self.weights()

    def pair_difference(self, i: int, j: int) -> complex:
        """``i * (delta_i - delta_j)``, purely imaginary."""
        return 1j * (self.delta(i) - self.delta(j))

    def gaps(self) -> np.ndarray:
        return np.diff(self._full)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.deltas.tolist())

    def __eq__(self, other):
        if not isinstance(other, PulseSequence):
            return NotImplemented
        return np.array_equal(self.deltas, other.deltas)

    def __hash__(self):
        return hash(self.deltas.tobytes())

    def __repr__(self):
        return f'PulseSequence({self.deltas.tolist()!r})'


def make_sequence(deltas) -> PulseSequence:
    """Validate ``deltas`` and wrap them in a :class:`PulseSequence`.

    The input order is never changed; unordered input is an error.

    Raises
    ------
    OutOfRange
        If any time lies outside the open interval (0, 1) or is not finite.
    NonMonotonic
        If the times are not strictly increasing.
    TooClose
        If two neighbouring times (or a time and an endpoint) are closer
        than :data:`EPS_SEP`.
    """
    d = np.asarray(deltas, dtype=float).reshape(-1)
    if not np.all(np.isfinite(d)):
        raise OutOfRange('pulse times must be finite')
    bad = np.flatnonzero((d <= 0.0) | (d >= 1.0))
    if bad.size:
        raise OutOfRange(f'delta[{bad[0] + 1}]={float(d[bad[0]])!r} is outside (0, 1)')
    steps = np.diff(d)
    bad = np.flatnonzero(steps <= 0.0)
    if bad.size:
        k = bad[0]
        raise NonMonotonic(f'delta[{k + 2}]={float(d[k + 1])!r} does not exceed '
                           f'delta[{k + 1}]={float(d[k])!r}')
    gaps = np.diff(np.concatenate(([0.0], d, [1.0])))
    bad = np.flatnonzero(gaps < EPS_SEP)
    if bad.size:
        raise TooClose(f'gap {float(gaps[bad[0]])!r} between delta[{bad[0]}] and '
                       f'delta[{bad[0] + 1}] is below {EPS_SEP}')
    return PulseSequence(d)


def empty() -> PulseSequence:
    """Free evolution, no pulses."""
    return PulseSequence(np.empty(0))


def udd(n: int) -> PulseSequence:
    """Uhrig sequence ``delta_j = sin^2(j pi / (2(n+1)))``."""
    if n < 0:
        raise ValueError('n must be nonnegative')
    j = np.arange(1, n + 1)
    return make_sequence(np.sin(j * np.pi / (2 * (n + 1))) ** 2)


def pdd(n: int) -> PulseSequence:
    """Equidistant sequence ``delta_j = j / (n+1)``."""
    if n < 0:
        raise ValueError('n must be nonnegative')
    return make_sequence(np.arange(1, n + 1) / (n + 1))


def reverse(seq: PulseSequence) -> PulseSequence:
    """Time-reversed sequence, ``delta'_j = 1 - delta_{n+1-j}``."""
    return make_sequence(1.0 - seq.deltas[::-1])


def to_json(seq: PulseSequence) -> str:
    return json.dumps([float(x) for x in seq.deltas])


def from_json(text: str) -> PulseSequence:
    data = json.loads(text)
    if not isinstance(data, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in data):
        raise ValueError('expected a JSON array of numbers')
    return make_sequence(data)


def to_csv(seq: PulseSequence) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(['j', 'delta_j'])
    for j, x in enumerate(seq.deltas, start=1):
        w.writerow([j, format(float(x), '.17g')])
    return buf.getvalue()


def from_csv(text: str) -> PulseSequence:
    rows = list(csv.DictReader(io.StringIO(text)))
    if rows and ('j' not in rows[0] or 'delta_j' not in rows[0]):
        raise ValueError("CSV needs columns 'j' and 'delta_j'")
    rows.sort(key=lambda r: int(r['j']))
    return make_sequence([float(r['delta_j']) for r in rows])

"""Optimal pulse timings from the stationarity conditions of ``I_n``.

The optimum satisfies ``dI_n/d delta_m = 0`` for every pulse. We drive
that residual to zero with a damped Newton iteration that uses the
analytic Hessian, continuing in ``z_c`` from a small cutoff where UDD is
already close to optimal. Newton alone converges to any stationary point,
saddles and maxima included, so each step uses the Hessian with its
eigenvalues replaced by their absolute values (the step is then always a
descent direction) and is accepted by an Armijo test on ``I_n``. Every
converged point is checked for local minimality; failures trigger seeded
restarts around the warm start.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NumericalFailure
from .objective import ObjectiveReport, I_quadrature, gradient, hessian
from .sequences import EPS_SEP, PulseSequence, make_sequence, udd

__all__ = ['SolverConfig', 'LocalResult', 'OptimizationResult', 'MultistartReport',
           'stationarity_residual', 'continuation_schedule', 'newton_minimize',
           'verify_minimum', 'solve_hlodd', 'solve_from', 'multistart', 'perturbed_starts']

log = logging.getLogger(__name__)

#: The residual of the stationarity system is the gradient itself.
stationarity_residual = gradient

_DAMPING_FLOOR = 1e-12
_ARMIJO = 1e-4


@dataclass(frozen=True)
class SolverConfig:
    residual_tol: float = 1e-10
    max_iters: int = 200
    damping: float = 1.0
    continuation_start: float | None = None   # default min(1, z_c)
    continuation_steps: int | None = None     # default min(ceil(z_c), 64)
    restarts: int = 8
    restart_magnitude: float = 0.05
    polish_iters: int = 3
    seed: int = 0

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ValueError('residual_tol must be positive')
        if self.max_iters < 1:
            raise ValueError('max_iters must be positive')
        if not 0 < self.damping <= 1:
            raise ValueError('damping must lie in (0, 1]')
        if self.continuation_start is not None and not self.continuation_start > 0:
            raise ValueError('continuation_start must be positive')
        if self.continuation_steps is not None and self.continuation_steps < 1:
            raise ValueError('continuation_steps must be positive')
        if self.restarts < 0:
            raise ValueError('restarts must be nonnegative')


@dataclass(frozen=True)
class LocalResult:
    deltas: np.ndarray
    value: float
    residual_norm: float
    iterations: int
    converged: bool
    reason: str


@dataclass
class OptimizationResult:
    sequence: PulseSequence
    objective: ObjectiveReport
    z_c: float
    residual_norm: float
    converged: bool
    iterations: int
    minimum_verified: bool
    path: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.sequence.n

    def to_record(self):
        return {
            'n': self.n,
            'z_c': float(self.z_c),
            'deltas': [float(x) for x in self.sequence.deltas],
            'I_value': float(self.objective.value),
            'residual_norm': float(self.residual_norm),
            'converged': bool(self.converged),
            'minimum_verified': bool(self.minimum_verified),
            'iterations': int(self.iterations),
            'continuation_path': [{'z_c': float(z), 'deltas': [float(x) for x in s.deltas]}
                                  for z, s in self.path],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_record(), **kwargs)


def continuation_schedule(z_c_target: float, config: SolverConfig = SolverConfig()) -> list:
    """Cutoffs visited on the way to ``z_c_target``; the last is the target itself."""
    if not z_c_target > 0:
        raise ValueError('z_c must be positive')
    start = config.continuation_start
    if start is None:
        start = min(1.0, z_c_target)
    steps = config.continuation_steps
    if steps is None:
        steps = min(math.ceil(z_c_target), 64)
    if start >= z_c_target or steps <= 1:
        return [float(z_c_target)]
    sched = np.linspace(start, z_c_target, steps)
    sched[-1] = z_c_target
    return [float(z) for z in sched]


def _feasible(x):
    return bool(np.all(np.diff(np.concatenate(([0.0], x, [1.0]))) >= EPS_SEP))


def _value(x, z_c):
    return I_quadrature(PulseSequence(x), z_c).value


def newton_minimize(x0, z_c: float, config: SolverConfig = SolverConfig()) -> LocalResult:
    """Damped, eigenvalue-corrected Newton iteration from ``x0`` at fixed ``z_c``.

    Steps that leave the feasible region are halved until they re-enter
    it. The run is converged once the residual max-norm is at most
    ``config.residual_tol`` and ``config.polish_iters`` consecutive steps
    have each lowered ``I_n`` by less than a relative 1e-6. Near small
    cutoffs the residual can be tiny long before ``I_n`` has settled, so
    the residual alone is not a stopping rule.
    """
    x = np.array(x0, dtype=float)
    if not _feasible(x):
        raise ValueError('starting point violates the pulse-sequence invariants')
    f = _value(x, z_c)
    polish = 0
    settled = False
    r = math.inf
    for it in range(1, config.max_iters + 1):
        seq = PulseSequence(x)
        g = gradient(seq, z_c)
        r = float(np.max(np.abs(g))) if g.size else 0.0
        done = r <= config.residual_tol
        if done and (polish >= config.polish_iters or r == 0.0):
            return LocalResult(x, f, r, it - 1, True, 'residual below tolerance')
        lam, V = np.linalg.eigh(hessian(seq, z_c))
        scale = float(np.max(np.abs(lam)))
        if scale == 0.0 or not np.isfinite(scale):
            return LocalResult(x, f, r, it - 1, done, 'degenerate Hessian')
        lam_abs = np.maximum(np.abs(lam), 1e-13 * scale)
        step = -V @ ((V.T @ g) / lam_abs)
        slope = float(g @ step)
        convex = bool(lam.min() > 0)
        alpha = config.damping
        accepted = False
        while alpha >= _DAMPING_FLOOR:
            xn = x + alpha * step
            if _feasible(xn):
                fn = _value(xn, z_c)
                if fn <= f + _ARMIJO * alpha * slope:
                    accepted = True
                elif convex and not done and fn <= f * (1 + 1e-10):
                    # I_n flat to rounding level: settle on the residual instead
                    rn = np.max(np.abs(gradient(PulseSequence(xn), z_c)))
                    accepted = rn < r
                if accepted:
                    break
            alpha *= 0.5
        if not accepted:
            if done:
                return LocalResult(x, f, r, it - 1, True, 'residual below tolerance')
            return LocalResult(x, f, r, it - 1, False, 'step damping underflow')
        gain = f - fn
        x, f = xn, fn
        settled = gain <= 1e-6 * (f + gain)
        if done:
            polish = polish + 1 if settled else 0
    g = gradient(PulseSequence(x), z_c)
    r = float(np.max(np.abs(g))) if g.size else 0.0
    ok = r <= config.residual_tol and settled
    if ok:
        reason = 'residual below tolerance'
    elif r <= config.residual_tol:
        reason = 'iteration budget exhausted while I_n still decreasing'
    else:
        reason = 'iteration budget exhausted'
    return LocalResult(x, f, r, config.max_iters, ok, reason)


def verify_minimum(seq: PulseSequence, z_c: float, residual_tol: float = 1e-10, seed: int = 0,
                   step: float = 1e-5, perturbation: float = 1e-3):
    """Check that a stationary ``seq`` is a local minimum of ``I_n``.

    Returns ``(ok, diagnostics)``. The Hessian comes from central
    differences of the analytic gradient; it must have no eigenvalue below
    ``-1e-8`` times the largest one. In addition ``2n`` random feasible
    points at distance ``perturbation`` must not lower ``I_n`` by more
    than ``1e-10 * I_n`` plus the quadrature error estimates. The slack is
    relative because at small cutoffs and many pulses ``I_n`` itself can be
    far below any fixed absolute threshold.
    """
    n = seq.n
    diag = {'seed': seed}
    g = gradient(seq, z_c)
    r = float(np.max(np.abs(g))) if n else 0.0
    diag['residual_norm'] = r
    if r > residual_tol:
        diag['reason'] = 'not stationary: residual above tolerance'
        return False, diag
    if n == 0:
        diag['reason'] = 'no free pulse times'
        return True, diag
    x = seq.deltas
    gaps = np.diff(seq.full())
    try:
        H = np.empty((n, n))
        for m in range(n):
            h = min(step, 0.25 * gaps[m], 0.25 * gaps[m + 1])
            e = np.zeros(n)
            e[m] = h
            H[:, m] = (gradient(PulseSequence(x + e), z_c)
                       - gradient(PulseSequence(x - e), z_c)) / (2 * h)
        H = 0.5 * (H + H.T)
        eig = np.linalg.eigvalsh(H)
    except (np.linalg.LinAlgError, FloatingPointError, ValueError) as exc:
        diag['reason'] = f'Hessian evaluation failed: {exc}'
        return False, diag
    if not np.all(np.isfinite(eig)):
        diag['reason'] = 'Hessian evaluation failed: non-finite entries'
        return False, diag
    diag['eig_min'] = float(eig[0])
    diag['eig_max'] = float(eig[-1])
    hess_ok = eig[-1] > 0 and eig[0] > -1e-8 * eig[-1]

    rng = np.random.default_rng(seed)
    rep0 = I_quadrature(seq, z_c)
    f0 = rep0.value
    values = []
    slack = []
    tries = 0
    while len(values) < 2 * n and tries < 200 * n:
        tries += 1
        d = rng.standard_normal(n)
        xp = x + perturbation * d / np.linalg.norm(d)
        if _feasible(xp):
            rep = I_quadrature(PulseSequence(xp), z_c)
            values.append(rep.value)
            slack.append(1e-10 * f0 + rep0.error_estimate + rep.error_estimate)
    diag['objective'] = f0
    diag['perturbed_min'] = float(min(values)) if values else None
    perturb_ok = len(values) == 2 * n and all(
        v >= f0 - s for v, s in zip(values, slack))
    if not hess_ok:
        diag['reason'] = 'Hessian has a negative eigenvalue'
    elif not perturb_ok:
        diag['reason'] = ('a nearby point has lower objective' if len(values) == 2 * n
                          else 'could not sample feasible perturbations')
    else:
        diag['reason'] = 'local minimum'
    return bool(hess_ok and perturb_ok), diag


def perturbed_starts(center, count: int, magnitude: float, rng) -> list:
    """``count`` feasible points within ``magnitude`` (per coordinate) of ``center``."""
    center = np.asarray(center, dtype=float)
    starts = []
    while len(starts) < count:
        x = np.sort(center + rng.uniform(-magnitude, magnitude, center.size))
        x = np.clip(x, 10 * EPS_SEP, 1 - 10 * EPS_SEP)
        if _feasible(x) and np.min(np.diff(x), initial=1.0) >= 1e-6:
            starts.append(x)
    return starts


@dataclass
class _Candidate:
    local: LocalResult
    verified: bool
    check: dict


def _attempt(x0, z_c, config, seed):
    local = newton_minimize(x0, z_c, config)
    if local.converged:
        ok, check = verify_minimum(PulseSequence(local.deltas), z_c, config.residual_tol, seed=seed)
    else:
        ok, check = False, {'reason': local.reason}
    return _Candidate(local, ok, check)


def _better(a: _Candidate, b: _Candidate | None):
    """Prefer verified minima, then lower objective."""
    if b is None:
        return True
    if a.verified != b.verified:
        return a.verified
    return a.local.value < b.local.value


def solve_from(start, z_c: float, config: SolverConfig = SolverConfig(), stage: int = 0):
    """Local solve at a single cutoff with saddle escape.

    Returns ``(candidate, diagnostics)`` where diagnostics records every
    restart.
    """
    x0 = start.deltas if isinstance(start, PulseSequence) else np.asarray(start, dtype=float)
    seed = config.seed * 1_000_003 + stage
    best = _attempt(x0, z_c, config, seed)
    diag = {'z_c': z_c, 'first': best.check.get('reason'), 'restarts': []}
    if best.verified:
        return best, diag
    rng = np.random.default_rng([config.seed, stage])
    for k, x in enumerate(perturbed_starts(x0, config.restarts, config.restart_magnitude, rng)):
        cand = _attempt(x, z_c, config, seed + k + 1)
        diag['restarts'].append({'value': cand.local.value, 'verified': cand.verified,
                                 'converged': cand.local.converged,
                                 'reason': cand.check.get('reason')})
        if _better(cand, best):
            best = cand
    log.debug('z_c=%g: %d restarts, best verified=%s I=%.6g', z_c, len(diag['restarts']),
              best.verified, best.local.value)
    return best, diag


def solve_hlodd(n: int, z_c: float, config: SolverConfig | None = None) -> OptimizationResult:
    """Locally optimal ``n``-pulse sequence for dimensionless cutoff ``z_c``.

    Starts from UDD at the first cutoff of :func:`continuation_schedule`
    and warm-starts every later cutoff from the previous solution. The
    iteration budget is ``max_iters`` per continuation step, pooled. The
    returned objective never exceeds that of UDD: if the search ends
    anywhere worse, UDD itself is returned with ``converged=False``.
    """
    if n < 1:
        raise ValueError('n must be at least 1')
    if not (z_c > 0 and math.isfinite(z_c)):
        raise ValueError('z_c must be positive')
    config = config or SolverConfig()
    x = udd(n).deltas
    path = []
    stages = []
    iterations = 0
    best = None
    carry = 0
    for k, z in enumerate(continuation_schedule(z_c, config)):
        # iterations a stage leaves unused stay available to later stages
        allowance = config.max_iters + carry
        best, diag = solve_from(x, z, replace(config, max_iters=allowance), stage=k)
        carry = allowance - best.local.iterations
        iterations += best.local.iterations
        x = best.local.deltas
        path.append((z, PulseSequence(x.copy())))
        stages.append(diag)

    final = PulseSequence(x)
    report = I_quadrature(final, z_c)
    baseline = udd(n)
    base_value = I_quadrature(baseline, z_c).value
    diagnostics = {'stages': stages, 'verification': best.check, 'reason': best.local.reason,
                   'udd_value': base_value}
    converged = best.local.converged and best.verified
    if report.value > base_value:
        log.info('n=%d z_c=%g: search ended above UDD, falling back', n, z_c)
        diagnostics['fallback'] = 'udd'
        final = baseline
        report = I_quadrature(baseline, z_c)
        converged = False
        verified, check = verify_minimum(baseline, z_c, config.residual_tol, seed=config.seed)
        diagnostics['verification'] = check
    else:
        verified = best.verified
    g = gradient(final, z_c)
    report = replace(report, gradient=g)
    return OptimizationResult(
        sequence=make_sequence(final.deltas),
        objective=report,
        z_c=float(z_c),
        residual_norm=float(np.max(np.abs(g))),
        converged=bool(converged),
        iterations=iterations,
        minimum_verified=bool(verified),
        path=path,
        diagnostics=diagnostics,
    )


@dataclass
class MultistartReport:
    n: int
    z_c: float
    runs: list
    clusters: list

    @property
    def distinct_minima(self):
        return len(self.clusters)


def multistart(n: int, z_c: float, config: SolverConfig = SolverConfig(), starts: int = 8,
               magnitude: float = 0.05, seed: int = 0, rtol: float = 1e-6) -> MultistartReport:
    """Solve directly at ``z_c`` from seeded perturbations of UDD.

    Converged runs are grouped: two runs share a cluster when their
    objective values agree to ``rtol`` or their pulse times agree to
    ``rtol`` (max-norm). Each cluster records whether its representative
    passed :func:`verify_minimum`; clusters other than the lowest are the
    distinct local minima found.
    """
    rng = np.random.default_rng(seed)
    runs = []
    for k, x0 in enumerate(perturbed_starts(udd(n).deltas, starts, magnitude, rng)):
        try:
            cand = _attempt(x0, z_c, config, seed * 1_000_003 + k)
        except NumericalFailure as exc:
            runs.append({'start': x0.tolist(), 'converged': False, 'reason': str(exc)})
            continue
        runs.append({'start': x0.tolist(), 'deltas': cand.local.deltas.tolist(),
                     'value': cand.local.value, 'residual_norm': cand.local.residual_norm,
                     'converged': cand.local.converged, 'verified': cand.verified,
                     'reason': cand.check.get('reason')})
    clusters = []
    for k, run in sorted(enumerate(runs), key=lambda kr: kr[1].get('value', math.inf)):
        if not run['converged']:
            continue
        for cl in clusters:
            same_value = abs(run['value'] - cl['value']) <= rtol * max(abs(cl['value']), abs(run['value']))
            same_point = np.max(np.abs(np.subtract(run['deltas'], cl['deltas']))) <= rtol
            if same_value or same_point:
                cl['members'].append(k)
                break
        else:
            clusters.append({'value': run['value'], 'deltas': run['deltas'],
                             'verified': run['verified'], 'members': [k]})
        run['cluster'] = next(i for i, cl in enumerate(clusters) if k in cl['members'])
    return MultistartReport(n, float(z_c), runs, clusters)

"""Optimal dynamical-decoupling pulse timings for ohmic dephasing noise
with a sharp high-frequency cutoff."""

from .errors import InvalidSpectrum, NonMonotonic, NumericalFailure, OutOfRange, TooClose
from .filter import dc_identity_check, filter_value, magnitude_squared_sumform
from .objective import (CutoffSpec, ObjectiveReport, SeriesParams, SpectrumModel, I_quadrature,
                        I_series, chi, gradient, hessian, integrand)
from .sequences import PulseSequence, make_sequence, pdd, reverse, udd
from .solver import (OptimizationResult, SolverConfig, continuation_schedule, multistart,
                     solve_hlodd, stationarity_residual, verify_minimum)

__version__ = '0.1.0'

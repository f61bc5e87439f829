import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ddopt.filter import (dc_identity_check, filter_response, filter_value, magnitude_squared,
                          magnitude_squared_sumform)
from ddopt.sequences import empty, make_sequence, pdd, reverse, udd

from .conftest import random_sequences
from .test_sequences import sequences


def literal_filter(seq, z):
    """The filter function written term by term: endpoints plus 2 (-1)^j per pulse."""
    n = seq.n
    y = 1 + (-1) ** (n + 1) * np.exp(1j * z)
    for j, d in enumerate(seq.deltas, start=1):
        y += 2 * (-1) ** j * np.exp(1j * z * d)
    return y


@pytest.mark.parametrize('seq', [empty(), udd(1), udd(4), pdd(3)], ids=repr)
def test_dc_value_is_zero(seq):
    assert abs(filter_value(seq, 0.0).value) == 0.0


def test_free_evolution_at_pi():
    fv = filter_value(empty(), np.pi)
    assert fv.value == pytest.approx(2.0, abs=1e-15)
    assert fv.magnitude_squared == pytest.approx(4.0, abs=1e-14)


def test_single_pulse_at_two_pi():
    assert filter_value(make_sequence([0.5]), 2 * np.pi).magnitude_squared == pytest.approx(16.0)


@given(sequences(), st.floats(-60, 60))
def test_compact_form_matches_literal(seq, z):
    assert filter_response(seq, z) == pytest.approx(literal_filter(seq, z), abs=1e-12)


@given(sequences(), st.floats(-60, 60))
def test_filter_value_invariants(seq, z):
    fv = filter_value(seq, z)
    assert fv.magnitude_squared == pytest.approx(abs(fv.value) ** 2, rel=4 * np.finfo(float).eps)
    assert 0.0 <= fv.magnitude_squared <= (2 * seq.n + 2) ** 2


def test_sumform_examples():
    assert magnitude_squared_sumform(udd(3), 0.0) == 0.0
    assert magnitude_squared_sumform(empty(), np.pi) == pytest.approx(4.0, rel=1e-15)
    direct = abs(literal_filter(udd(2), 1.0)) ** 2
    assert magnitude_squared_sumform(udd(2), 1.0) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize('n', range(0, 9))
def test_sumform_agrees_with_direct(n):
    z = np.linspace(0.05, 40, 300)
    for seq in [udd(n), pdd(n)] + random_sequences(n, 5, seed=n):
        direct = magnitude_squared(seq, z)
        double = magnitude_squared_sumform(seq, z)
        # cancellation in the double sum limits agreement to the largest term size
        assert np.max(np.abs(direct - double)) < 1e-13 * (2 * n + 2) ** 2


@pytest.mark.parametrize('n', range(0, 33))
def test_dc_identity_exact(n):
    assert dc_identity_check(n) == 0
    assert isinstance(dc_identity_check(n), int)


@given(sequences(), st.floats(0, 60))
def test_reversal_preserves_magnitude(seq, z):
    a = magnitude_squared(seq, z)
    b = magnitude_squared(reverse(seq), z)
    assert b == pytest.approx(a, rel=1e-12, abs=1e-24 + 1e-13 * (2 * seq.n + 2))


@pytest.mark.parametrize('n', [0, 1, 3, 6])
def test_quadratic_zero_at_origin(n):
    for seq in [udd(n), pdd(n)] + random_sequences(n, 3, seed=10 + n):
        z = np.logspace(-6, -2, 20)
        ratio = magnitude_squared(seq, z) / z ** 2
        bound = (np.abs(seq.coefficients()) @ seq.full()) ** 2
        assert np.all(ratio <= bound * (1 + 1e-6))

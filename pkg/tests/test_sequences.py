import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddopt.errors import NonMonotonic, OutOfRange, TooClose
from ddopt.sequences import (EPS_SEP, empty, from_csv, from_json, make_sequence, pdd, reverse,
                             to_csv, to_json, udd)


@st.composite
def sequences(draw, max_n=12):
    n = draw(st.integers(0, max_n))
    gaps = draw(st.lists(st.floats(0.01, 1.0), min_size=n + 1, max_size=n + 1))
    x = np.cumsum(gaps)[:-1] / np.sum(gaps)
    return make_sequence(x)


def test_make_sequence_valid():
    s = make_sequence([0.25, 0.75])
    assert s.n == 2
    assert s.deltas.tolist() == [0.25, 0.75]


def test_make_sequence_rejects_unordered():
    with pytest.raises(NonMonotonic):
        make_sequence([0.75, 0.25])


def test_make_sequence_rejects_close_pulses():
    with pytest.raises(TooClose):
        make_sequence([0.3, 0.3 + EPS_SEP / 2])


def test_make_sequence_rejects_close_to_endpoint():
    with pytest.raises(TooClose):
        make_sequence([EPS_SEP / 2, 0.5])


@pytest.mark.parametrize('bad', [[0.0, 0.5], [0.5, 1.0], [-0.1], [1.2], [float('nan')]])
def test_make_sequence_out_of_range(bad):
    with pytest.raises(OutOfRange):
        make_sequence(bad)


def test_equal_times_are_nonmonotonic():
    with pytest.raises(NonMonotonic):
        make_sequence([0.4, 0.4])


def test_sequence_is_immutable():
    s = make_sequence([0.2, 0.4])
    with pytest.raises(ValueError):
        s.deltas[0] = 0.1


@pytest.mark.parametrize('n, expected', [
    (1, [0.5]),
    (2, [0.25, 0.75]),
    (3, [0.1464466094067262, 0.5, 0.8535533905932738]),
])
def test_udd_values(n, expected):
    np.testing.assert_allclose(udd(n).deltas, expected, rtol=0, atol=1e-15)


def test_udd_zero_is_free_evolution():
    assert udd(0).n == 0
    assert pdd(0).n == 0


@pytest.mark.parametrize('n, expected', [
    (1, [0.5]),
    (3, [0.25, 0.5, 0.75]),
    (4, [0.2, 0.4, 0.6, 0.8]),
])
def test_pdd_values(n, expected):
    np.testing.assert_allclose(pdd(n).deltas, expected, rtol=0, atol=1e-15)


def test_reverse_examples():
    np.testing.assert_allclose(reverse(make_sequence([0.2, 0.6])).deltas, [0.4, 0.8], atol=1e-15)
    assert reverse(make_sequence([0.5])).deltas.tolist() == [0.5]
    np.testing.assert_allclose(reverse(udd(3)).deltas, udd(3).deltas, atol=1e-15)


@pytest.mark.parametrize('n', range(1, 20))
def test_baselines_reflection_symmetric(n):
    np.testing.assert_allclose(reverse(udd(n)).deltas, udd(n).deltas, rtol=0, atol=4e-16)
    np.testing.assert_allclose(reverse(pdd(n)).deltas, pdd(n).deltas, rtol=0, atol=4e-16)


@given(sequences())
def test_reverse_is_involution(seq):
    np.testing.assert_allclose(reverse(reverse(seq)).deltas, seq.deltas, rtol=0, atol=1e-15)


@given(sequences())
def test_pair_difference_antisymmetric(seq):
    for i in range(seq.n + 2):
        assert seq.pair_difference(i, i) == 0
        for j in range(seq.n + 2):
            assert seq.pair_difference(i, j) == -seq.pair_difference(j, i)


def test_boundary_accessor_and_weights():
    s = make_sequence([0.3, 0.6])
    assert s.delta(0) == 0.0 and s.delta(3) == 1.0
    assert s.weights().tolist() == [0, 1, 1, 0]
    assert s.coefficients().tolist() == [1.0, -2.0, 2.0, -1.0]
    with pytest.raises(IndexError):
        s.delta(4)


@settings(max_examples=50)
@given(sequences())
def test_json_and_csv_roundtrip(seq):
    assert from_json(to_json(seq)) == seq
    assert from_csv(to_csv(seq)) == seq


def test_json_format():
    assert to_json(make_sequence([0.25, 0.75])) == '[0.25, 0.75]'
    assert from_json('[0.25, 0.75]').n == 2
    assert from_json('[]') == empty()
    with pytest.raises(ValueError):
        from_json('{"a": 1}')


def test_csv_format():
    assert to_csv(make_sequence([0.25, 0.75])) == 'j,delta_j\n1,0.25\n2,0.75\n'

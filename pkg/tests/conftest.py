import numpy as np
import pytest

from ddopt.sequences import EPS_SEP, make_sequence


def random_sequences(n, count, seed):
    """Seeded random valid sequences with gaps well above the separation floor."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        x = np.sort(rng.uniform(0.0, 1.0, n))
        if np.min(np.diff(np.concatenate(([0.0], x, [1.0])))) > 1e-3:
            out.append(make_sequence(x))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def eps_sep():
    return EPS_SEP


#: Lines appended by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(':'))):
            terminalreporter.write_line(line)

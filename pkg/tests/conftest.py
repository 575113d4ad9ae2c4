import numpy as np
import pytest
from hypothesis import strategies as st

from stabil.polycore import ComplexPoly


def cplx(max_abs=3.0):
    part = st.floats(-max_abs, max_abs, allow_nan=False, allow_infinity=False)
    return st.builds(complex, part, part)


def polys(max_degree=30, max_abs=3.0):
    return st.lists(cplx(max_abs), min_size=1, max_size=max_degree + 1).map(ComplexPoly)


def random_poly(rng, degree):
    return ComplexPoly(rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one summary line per acceptance criterion, shown at the end of the run
_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    def record(tag, ok, detail, seconds):
        line = f"{'PASS' if ok else 'FAIL'}  {tag}: {detail} [{seconds:.1f} s]"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

"""Shared fixtures: small hand-checked functions with known values."""

import pytest

from submax import (ConstraintSystem, UniformMatroid, ValueOracle,
                    coverage_function, modular_function)

#: One verdict line per acceptance criterion, printed after the run so the
#: gate's outcome is visible even when every test passes.
ACCEPTANCE_VERDICTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture
def cover4():
    """Four sets over five points, all weights one.

    f values worked out by hand: singletons 2,2,2,3; greedy with k=2 picks
    element 3 (gain 3) then element 0 (gain 2) for value 5, which is also
    the unique optimum {0, 3}.
    """
    return coverage_function([[0, 1], [1, 2], [2, 3], [2, 3, 4]], 5)


@pytest.fixture
def cover4_oracle(cover4):
    return ValueOracle(cover4)


@pytest.fixture
def mod5():
    return modular_function([2.0, 3.0, 4.0, 1.0, 5.0])


@pytest.fixture
def card2():
    return ConstraintSystem("cardinality", k=2)


@pytest.fixture
def uni32():
    return UniformMatroid(3, 2)

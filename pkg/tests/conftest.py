import math

import pytest

from nhthermo.models import example1, toeplitz_model

SQRT7_4 = math.sqrt(7.0) / 4.0


@pytest.fixture(scope="session")
def ex1():
    return example1()


@pytest.fixture(scope="session")
def toeplitz12_two_charge():
    return toeplitz_model(12, 0.5, two_charge=True)[1]


@pytest.fixture(scope="session")
def toeplitz50():
    return toeplitz_model(50, SQRT7_4)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[number])

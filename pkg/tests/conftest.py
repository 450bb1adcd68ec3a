import numpy as np
import pytest

from osgoodlab.modulus import Modulus
from osgoodlab.operator import OperatorSpec


BUILTIN_OSGOOD = [Modulus.lipschitz(), Modulus.loglip(), Modulus.logloglip(), Modulus.sec4()]


@pytest.fixture(scope="session")
def heat_spec():
    return OperatorSpec.constant(1, 1.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])

import sys

import numpy as np
import pytest

from junta_lab.instances import haar_matrix
from junta_lab.seeding import make_rng

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


@pytest.fixture
def cnot():
    return CNOT.copy()


@pytest.fixture
def xi():
    return np.kron(X, I2)


def random_unitary(n, seed):
    return haar_matrix(2**n, make_rng(seed, 99))


def random_subset(rng, n, p=0.5):
    return {i for i in range(1, n + 1) if rng.random() < p}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

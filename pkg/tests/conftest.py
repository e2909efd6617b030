import sys

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SQRT_Q = np.array([[50.5, -49.5], [-49.5, 50.5]])
# U diag(1, 10) U^T with U = [[1, -1], [1, 1]] / sqrt(2)
SQRT_Q_ROOT = np.array([[5.5, -4.5], [-4.5, 5.5]])


@pytest.fixture
def rng():
    return np.random.default_rng(20001)


def random_spd(rng, n, shift=0.1):
    B = rng.normal(size=(n, n))
    return B @ B.T + shift * np.eye(n)


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    C = rng.normal(size=(rank, n))
    return C.T @ C


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    return Q * np.sign(np.diag(R))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.report_lines():
        terminalreporter.write_line(line)

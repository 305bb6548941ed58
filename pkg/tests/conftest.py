import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def record(number, title, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")
        print(ACCEPTANCE_LINES[-1])
        return passed

    return record


FIG1 = dict(theta=math.pi / 2, phi=math.pi / 2, n_bar=25.0, beta=math.pi / 4, rho_c=math.pi / 6)


def dense_generator(n_max):
    """G = sigma_+ a + sigma_- a^dag on the truncated space, basis [e_0..e_N, g_0..g_N]."""
    dim = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    sigma_plus = np.array([[0, 1], [0, 0]])
    op = np.kron(sigma_plus, a)
    return op + op.conj().T

import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def sphere_samples():
    from triangleland.montecarlo import McConfig, sample_array
    return sample_array(McConfig(seed=42, n_samples=100_000))


@pytest.fixture(scope="session")
def gaussian_triangles():
    """Triangles with i.i.d. standard normal vertices.

    Their shapes are uniform on the shape sphere, which gives an oracle that
    never goes through the Hopf map.
    """
    rng = np.random.default_rng(20240611)
    return rng.standard_normal((1_000_000, 3, 2))


# --- acceptance summary ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []
SUITE_BUDGET_S = 120.0
_START = time.perf_counter()


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for a criterion, then assert it."""
    def record(label: str, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _START
    ok = elapsed <= SUITE_BUDGET_S
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion 9 (runtime): "
                            f"suite took {elapsed:.1f} s, budget {SUITE_BUDGET_S:.0f} s")
    if not ok and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

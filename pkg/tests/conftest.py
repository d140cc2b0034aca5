import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("oplab", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("oplab")

ACCEPTANCE = {}


def disk_points(radius=0.95):
    """Hypothesis strategy for points of the disk |z| <= radius."""
    return st.builds(
        lambda r, t: complex(radius * math.sqrt(r) * math.cos(t), radius * math.sqrt(r) * math.sin(t)),
        st.floats(0.0, 1.0),
        st.floats(0.0, 2 * math.pi),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if name.startswith("test_criterion_"):
        ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        label = name[len("test_criterion_"):]
        verdict = "PASS" if ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {label}")

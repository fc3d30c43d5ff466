from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from mellinzeta.arith import divisor_sieve

settings.register_profile("mz", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("mz")

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def dtable():
    return divisor_sieve(200_000)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

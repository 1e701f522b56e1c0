"""Shared test plumbing.

Two jobs: a hypothesis profile that keeps property tests deterministic
and free of wall-clock deadlines, and the acceptance report, a registry
the acceptance tests write one PASS/FAIL line per criterion into, which
gets printed as its own section at the end of the pytest run.
"""

from __future__ import annotations

import time
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

_ACCEPTANCE_LINES: list[str] = []


class AcceptanceReport:
    """Collects the per-criterion verdict lines."""

    @contextmanager
    def criterion(self, number: int, label: str):
        start = time.perf_counter()
        try:
            yield
        except BaseException:
            elapsed = time.perf_counter() - start
            _ACCEPTANCE_LINES.append(
                f"criterion {number:02d} ({label}): FAIL [{elapsed:.1f}s]"
            )
            raise
        elapsed = time.perf_counter() - start
        _ACCEPTANCE_LINES.append(
            f"criterion {number:02d} ({label}): PASS [{elapsed:.1f}s]"
        )

    def note(self, text: str) -> None:
        """Attach an informational line under the most recent criterion."""
        _ACCEPTANCE_LINES.append(f"    {text}")


@pytest.fixture(scope="session")
def acceptance_report() -> AcceptanceReport:
    return AcceptanceReport()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)

"""Shared fixtures plus a one-line-per-criterion acceptance summary."""

from __future__ import annotations

import pytest

from helpers import load

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


@pytest.fixture
def fig():
    return load


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.outcome == "passed" else "FAIL"
        _ACCEPTANCE[name] = (outcome, f"{report.duration:.1f}s")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        outcome, took = _ACCEPTANCE[name]
        num = name.split("_")[2]
        title = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {num} {outcome}: {title} ({took})")

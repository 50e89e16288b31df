"""Shared fixtures and the acceptance summary printed after the run."""

from __future__ import annotations

import pytest

from wf2powl import fixtures

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    """Register one pass/fail line for the acceptance summary."""

    def record(name: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE.append((name, passed, detail))
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")


@pytest.fixture
def seq():
    return fixtures.sequence_net()


@pytest.fixture
def xor():
    return fixtures.xor_net()


@pytest.fixture
def conc():
    return fixtures.concurrent_net()


@pytest.fixture
def loop():
    return fixtures.loop_net()

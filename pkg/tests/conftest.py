"""Shared fixtures and the acceptance-summary reporter."""

import pytest

from uplink_ee import load_config

ACCEPTANCE_LINES = []


def record(criterion: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {criterion}: {status} — {detail}")


@pytest.fixture(scope="session")
def default_cfg():
    return load_config()


@pytest.fixture(scope="session")
def prop(default_cfg):
    return default_cfg.propagation


@pytest.fixture(scope="session")
def hw(default_cfg):
    return default_cfg.hardware


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

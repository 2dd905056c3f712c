import pytest

from twowaycg.core import fixture_a1, fixture_a2

# Filled by test_acceptance; echoed at the end of the run.
ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def a1():
    return fixture_a1()


@pytest.fixture
def a2():
    return fixture_a2()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])

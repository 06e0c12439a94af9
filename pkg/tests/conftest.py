import pytest

CRITERIA_LINES = []


@pytest.fixture
def criterion_log():
    return CRITERIA_LINES


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)

import pytest

from skewlab.harness import DEFAULT_GAUGES

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=DEFAULT_GAUGES)
def gauge_text(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

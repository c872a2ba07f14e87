import pytest

_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance_report():
    """Collect one verdict line per acceptance criterion for the terminal summary."""

    def record(line: str):
        _acceptance_lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)

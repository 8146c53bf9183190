import pytest

ACCEPTANCE_LINES = {}


@pytest.fixture
def record():
    """Record a one-line verdict for an acceptance criterion."""

    def _record(number, ok, detail=""):
        ACCEPTANCE_LINES[number] = f"criterion {str(number):>4}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])

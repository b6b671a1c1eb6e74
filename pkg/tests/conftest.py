import pytest

from qubitfield.rng import RngStream

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return RngStream(20240601)


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert it."""

    def check(number: int, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)

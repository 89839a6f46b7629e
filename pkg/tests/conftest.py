import pytest

_LINES: list[str] = []


@pytest.fixture
def record():
    """Print and keep one PASS/FAIL line per acceptance criterion."""
    def _record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        _LINES.append(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)

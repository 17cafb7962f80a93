import pytest

_criteria: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record a numbered acceptance result; the summary prints one line per criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        _criteria[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok, detail = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")

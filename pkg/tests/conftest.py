import pytest

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Store one pass/fail line per acceptance criterion for the summary."""

    def _record(criterion: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE[criterion] = (bool(ok), detail)
        return bool(ok)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k:>2}: {detail}")

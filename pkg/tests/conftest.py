import pytest

_LINES = []


class AcceptanceRecorder:
    def __call__(self, number: int, title: str, passed: bool, detail: str = ""):
        _LINES.append((number, title, bool(passed), detail))
        return passed


@pytest.fixture
def acceptance():
    return AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_LINES):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {title}  [{detail}]")

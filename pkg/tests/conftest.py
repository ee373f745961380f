import pytest

_REPORT: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criterion (slow)")


@pytest.fixture
def report():
    """``report(key, passed, detail)`` registers one acceptance line."""

    def add(key: str, title: str, passed: bool, detail: str = "") -> bool:
        status = "PASS" if passed else "FAIL"
        _REPORT[key] = f"{key} {title}: {status}" + (f"  [{detail}]" if detail else "")
        return passed

    return add


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_REPORT, key=lambda k: int(k[1:])):
        terminalreporter.write_line(_REPORT[key])

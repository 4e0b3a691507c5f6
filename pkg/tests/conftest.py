import pytest

from repbench import _backend

BACKENDS = ["python"] + (["cython"] if _backend.COMPILED else [])

# filled by test_acceptance.py; one (criterion, passed, detail) per check
ACCEPTANCE_LINES = []


@pytest.fixture(params=BACKENDS)
def backend(request):
    previous = _backend.name
    _backend.use(request.param)
    yield request.param
    _backend.use(previous)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in ACCEPTANCE_LINES:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {criterion}: {detail}")

import pytest

from kleinian.curves import CurveSpec
from kleinian.sigma import sigma_expand

_MODELS = {}
ACCEPTANCE_LINES = []


def solved(n, s, cap=None):
    key = (n, s, cap)
    if key not in _MODELS:
        _MODELS[key] = sigma_expand(CurveSpec(n, s), cap)
    return _MODELS[key]


@pytest.fixture(scope="session")
def m23():
    return solved(2, 3)


@pytest.fixture(scope="session")
def m25():
    return solved(2, 5)


@pytest.fixture(scope="session")
def m27():
    return solved(2, 7)


@pytest.fixture(scope="session")
def m34():
    return solved(3, 4)


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""
    def record(cid, ok, text):
        ACCEPTANCE_LINES.append("criterion %-3s %s  %s" % (cid, "PASS" if ok else "FAIL", text))
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)

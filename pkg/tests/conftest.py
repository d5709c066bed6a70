import pytest

from tfsmt.distinguishing import build_da
from tfsmt.engine import FaultModel
from tfsmt.models import m1, p1
from tfsmt.timed import TimedSequence

E_INIT = "b@0.5 a@1 b@6.7 a@7.2"
FIVE_TESTS = ["b@0.5 a@1 b@6.7 a@7.2", "a@3", "a@4 a@8", "b@0 a@0 b@0 a@0", "b@0 a@0 a@0"]


@pytest.fixture(scope="session")
def M1():
    return m1()


@pytest.fixture(scope="session")
def S1(M1):
    return M1.spec


@pytest.fixture(scope="session")
def P1(M1):
    return p1(M1)


@pytest.fixture(scope="session")
def da_m1(S1, M1):
    return build_da(S1, M1)


@pytest.fixture(scope="session")
def fm1(M1):
    return FaultModel(M1)


@pytest.fixture
def alpha():
    return TimedSequence.parse(E_INIT)


# one summary line per acceptance criterion
_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::test_criterion_", 1)[1].split("[", 1)[0]
        ok = report.outcome == "passed" and _criteria.get(name, True)
        _criteria[name] = ok


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        num, _, what = name.partition("_")
        verdict = "PASS" if _criteria[name] else "FAIL"
        terminalreporter.write_line(f"criterion {int(num):2d} {verdict}  {what.replace('_', ' ')}")

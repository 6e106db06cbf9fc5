from __future__ import annotations

from collections import OrderedDict

import pytest

import synclattice as sl

CRITERIA: "OrderedDict[int, tuple[str, list[str]]]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            CRITERIA.setdefault(number, (title, []))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for number, (title, outcomes) in CRITERIA.items():
        if f"criterion_{number}_" in report.nodeid:
            outcomes.append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, (title, outcomes) in sorted(CRITERIA.items()):
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number}: {title} ({len(outcomes)} checks)")


@pytest.fixture(scope="session")
def two_type():
    return sl.fixture("two_type_7")


@pytest.fixture(scope="session")
def solid():
    return sl.fixture("solid_7")


@pytest.fixture(scope="session")
def dashed():
    return sl.fixture("dashed_7")


@pytest.fixture(scope="session")
def union9():
    return sl.fixture("union_9")


@pytest.fixture(scope="session")
def tree15():
    return sl.fixture("tree_15")


@pytest.fixture(scope="session")
def interior3():
    return sl.fixture("interior_3")

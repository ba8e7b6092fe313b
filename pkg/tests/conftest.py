import os

import pytest

from opgpd import kernels

if os.environ.get("OPGPD_BACKEND"):
    kernels.set_backend(os.environ["OPGPD_BACKEND"])

_criteria: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number = getattr(report, "criterion", None)
    if number is None:
        return
    _criteria.setdefault(number, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status = "PASS" if all(o == "passed" for o in _criteria[number]) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}")

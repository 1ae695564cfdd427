"""Per-criterion PASS/FAIL summary for the acceptance suite."""
import collections

import pytest

_OUTCOMES = collections.OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _OUTCOMES.setdefault(mark.args, [])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None and (report.when == "call" or report.failed):
        _OUTCOMES.setdefault(mark.args, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not any(_OUTCOMES.values()):
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), results in sorted(_OUTCOMES.items()):
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number} [{title}]: {status} ({sum(results)}/{len(results)} checks)")

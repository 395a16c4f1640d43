"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

import re

_CRITERIA: dict[str, dict] = {}


def _criterion(nodeid):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", nodeid)
    return int(match.group(1)) if match else None


def pytest_collection_modifyitems(items):
    for item in items:
        number = _criterion(item.nodeid)
        if number is not None:
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _CRITERIA.setdefault(number, {"doc": doc, "failed": [], "ran": 0})


def pytest_runtest_logreport(report):
    number = _criterion(report.nodeid)
    if number is None:
        return
    entry = _CRITERIA[number]
    if report.when == "call" or report.outcome != "passed":
        entry["ran"] += report.when == "call"
        if report.failed:
            entry["failed"].append(report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        if not entry["ran"] and not entry["failed"]:
            status = "SKIP"
        else:
            status = "FAIL" if entry["failed"] else "PASS"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {entry['doc']}")

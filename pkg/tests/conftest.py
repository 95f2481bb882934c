import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        notes = [v for k, v in item.user_properties if k == "note"]
        prev = _results.get(number)
        ok = report.outcome == "passed" and (prev is None or prev[1])
        _results[number] = (title, ok, (prev[2] if prev else []) + notes)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_results):
        title, ok, notes = _results[number]
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}")
        for note in notes:
            tr.write_line(f"       {note}")

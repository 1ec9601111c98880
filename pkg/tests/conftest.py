import re

_CRITERIA = {}
_PATTERN = re.compile(r"test_criterion_(\d+)_")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or report.outcome == "failed" or (report.when == "setup" and report.skipped):
        num = int(m.group(1))
        ok = report.outcome == "passed"
        _CRITERIA[num] = _CRITERIA.get(num, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if _CRITERIA[num] else 'FAIL'}")

import re

ACCEPTANCE_FILE = "test_acceptance.py"
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if ACCEPTANCE_FILE not in report.nodeid:
        return
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        status = "PASS" if report.outcome == "passed" else "FAIL"
        if _results.get(k, ("PASS",))[0] == "PASS":
            _results[k] = (status, m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        status, title = _results[k]
        terminalreporter.write_line(f"criterion {k}: {status}  {title}")

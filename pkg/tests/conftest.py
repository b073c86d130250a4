import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")
_outcomes: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(int(m.group(1)), []).append(report.nodeid if report.outcome != "passed" else "")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        failed = [nodeid for nodeid in _outcomes[n] if nodeid]
        line = f"criterion {n}: {'FAIL' if failed else 'PASS'}"
        if failed:
            line += "  (" + ", ".join(f.split("::")[-1] for f in failed) + ")"
        terminalreporter.write_line(line)

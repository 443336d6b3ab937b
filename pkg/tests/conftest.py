"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_ACCEPTANCE):
        outcome, duration = _ACCEPTANCE[nodeid]
        name = nodeid.rsplit("::", 1)[1].removeprefix("test_criterion_")
        number, _, label = name.partition("_")
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(
            f"{status} criterion {int(number):>2} {label.replace('_', ' ')} ({duration:.1f} s)")

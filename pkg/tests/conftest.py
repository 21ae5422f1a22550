import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")
    config._acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        item.config._acceptance.append((number, title, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    grouped = {}
    for number, title, outcome, duration in config._acceptance:
        grouped.setdefault((number, title), []).append((outcome, duration))
    if not grouped:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), runs in sorted(grouped.items()):
        verdict = "PASS" if all(o == "passed" for o, _ in runs) else "FAIL"
        extra = f", {len(runs)} cases" if len(runs) > 1 else ""
        seconds = sum(d for _, d in runs)
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title} ({seconds:.2f}s{extra})")

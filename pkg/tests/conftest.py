import time

import pytest

SUITE_BUDGET_S = 300.0
_results = []
_start = time.perf_counter()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("acceptance") is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        detail = dict(item.user_properties).get("detail", "")
        label = item.get_closest_marker("acceptance").args[0]
        _results.append((label, rep.outcome, detail))


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _start
    session.config._suite_elapsed = elapsed
    if elapsed > SUITE_BUDGET_S and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label, outcome, detail in sorted(_results):
        status = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"[{status}] {label}: {detail}")
    elapsed = getattr(config, "_suite_elapsed", time.perf_counter() - _start)
    status = "PASS" if elapsed <= SUITE_BUDGET_S else "FAIL"
    tr.write_line(f"[{status}] AC9b full-suite runtime: {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")

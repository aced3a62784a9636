import time

import pytest

_RESULTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        number, title = marker.args
        ok = outcome.excinfo is None
        _RESULTS.append((number, title, ok, time.perf_counter() - start, item.name))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, seconds, name in sorted(_RESULTS):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2} {verdict}  {title}  ({seconds:.1f} s, {name})")

import random

import pytest

from psiherm.algebra import BUILTIN_FAMILY, builtin_algebra

_CRITERIA: dict[int, dict] = {}


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(params=BUILTIN_FAMILY)
def builtin(request):
    return builtin_algebra(request.param)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    n, desc = marker.args
    entry = _CRITERIA.setdefault(n, {"desc": desc, "passed": 0, "failed": 0})
    if rep.failed:
        entry["failed"] += 1
    elif rep.when == "call" and rep.passed:
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        verdict = "PASS" if e["failed"] == 0 and e["passed"] > 0 else "FAIL"
        terminalreporter.write_line(
            f"criterion {n}: {verdict}  ({e['passed']} passed, {e['failed']} failed)  {e['desc']}")

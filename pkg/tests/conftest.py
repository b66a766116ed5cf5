import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when not in ("setup", "call"):
        return
    n = getattr(report, "criterion", None)
    if n is None:
        return
    prev = _criteria.get(n[0], (n[1], "PASS"))
    outcome = prev[1]
    if report.failed:
        outcome = "FAIL"
    elif report.skipped and outcome != "FAIL":
        outcome = "SKIP"
    _criteria[n[0]] = (n[1], outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep.criterion = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, outcome = _criteria[n]
        terminalreporter.write_line(f"AC{n:02d} {outcome:4s} {title}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import numpy as np
import pytest

from acotsp import DistanceMatrix

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria[number] = (title, rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcome = _criteria[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {title}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_square():
    return DistanceMatrix(np.array([
        [0.0, 1.0, 2 ** 0.5, 1.0],
        [1.0, 0.0, 1.0, 2 ** 0.5],
        [2 ** 0.5, 1.0, 0.0, 1.0],
        [1.0, 2 ** 0.5, 1.0, 0.0],
    ]))


@pytest.fixture
def collinear():
    # cities at x = 0, 1, 3 on a line
    return DistanceMatrix(np.array([[0.0, 1, 3], [1, 0, 2], [3, 2, 0]]))

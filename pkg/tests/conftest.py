import pathlib
import sys

import pytest

from structrobust.graph import load_graph
from structrobust.numeric import RandomizedConfig

sys.path.insert(0, str(pathlib.Path(__file__).parent))

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
GRAPH_FIXTURES = sorted(p.stem for p in FIXTURES.glob("*.json") if not p.stem.startswith("linear_"))


def fixture_graph(name):
    return load_graph(FIXTURES / f"{name}.json")


@pytest.fixture
def cfg():
    return RandomizedConfig(seed=20240611)


@pytest.fixture
def fig1():
    return fixture_graph("fig1")


@pytest.fixture
def fig2():
    return fixture_graph("fig2")


@pytest.fixture
def example2():
    return fixture_graph("example2")


@pytest.fixture
def fig6a():
    return fixture_graph("fig6a")


@pytest.fixture
def fig7b():
    return fixture_graph("fig7b")


_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (
        report.when == "call" or (report.when == "setup" and report.outcome != "passed")
    ):
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")

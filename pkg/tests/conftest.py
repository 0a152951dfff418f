import random

import pytest

from ftvtest.synthetic import grid_graph
from helpers import path_graph

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def path4():
    return path_graph(["a", "b", "c", "d"])


@pytest.fixture
def grid4():
    return grid_graph(4, 4)


@pytest.fixture
def rng():
    return random.Random(12345)


# --- acceptance summary ------------------------------------------------------

def pytest_collection_modifyitems(items):
    # @pytest.mark.criterion(n, title) tags a test for the summary below.
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            item.user_properties.append(("criterion", marker.args[0]))
            item.user_properties.append(("title", marker.args[1]))


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        entry = ACCEPTANCE_RESULTS.setdefault(props["criterion"], [props.get("title", ""), True, []])
        if report.failed:
            entry[1] = False
            entry[2].append(report.nodeid.split("::")[-1])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE_RESULTS):
        title, ok, failed = ACCEPTANCE_RESULTS[crit]
        line = f"criterion {crit}: {'PASS' if ok else 'FAIL'}  {title}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)

import pytest

from atfkit.atbd import make_diagram, nodal_trade

CP2_VERTS = [(-1, -1), (2, -1), (-1, 2)]


@pytest.fixture
def cp2_triangle():
    return make_diagram(CP2_VERTS, monotone_point=(0, 0))


@pytest.fixture
def cp2_three_node(cp2_triangle):
    d = cp2_triangle
    for i in range(3):
        d = nodal_trade(d, i)
    return d


_criteria: dict[int, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    if report.failed:
        _criteria[n] = "FAIL"
    elif report.when == "call" and n not in _criteria:
        _criteria[n] = "PASS" if report.passed else "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    from test_acceptance import TITLES

    terminalreporter.section("acceptance criteria")
    for n in sorted(TITLES):
        terminalreporter.write_line(f"criterion {n}: {_criteria.get(n, 'NOT RUN'):7} {TITLES[n]}")

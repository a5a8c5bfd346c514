import pytest

from acceptance_log import RESULTS

from gridfloer.corpus import corpus
from gridfloer.grid import GridDiagram

# (2,4) torus link; found by random search over size 6 grids
TORUS_2_4 = GridDiagram(6, (4, 3, 2, 1, 0, 5), (1, 0, 4, 5, 3, 2), "t24")


@pytest.fixture(scope="session")
def grids():
    return corpus()


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

import pytest

from transnet.basis import build_engine, four_power_set
from transnet.config import parse_config
from transnet.coverage import compute_adjustable, fit_table
from transnet.grid import GridSpec
from transnet.netbuild import build_network

BASELINE_DOC = {
    "grid": {"n_x": 5, "n_y": 5},
    "functions": "four_power",
    "alpha": 10,
    "tau_s": 0.2,
    "link_threshold": 0.6,
    "seed": 7,
    "layout": {"iterations": 50},
}


@pytest.fixture(scope="session")
def g55():
    return GridSpec(5, 5)


@pytest.fixture(scope="session")
def engine55(g55):
    return build_engine(four_power_set(), g55, alpha=10)


@pytest.fixture(scope="session")
def table55(engine55):
    return fit_table(engine55)


@pytest.fixture(scope="session")
def sets55(engine55, table55):
    return compute_adjustable(engine55, tau_s=0.2, table=table55)


@pytest.fixture(scope="session")
def baseline_net(sets55, g55):
    return build_network(sets55, g55, L=0.6)


@pytest.fixture
def baseline_cfg():
    return parse_config(dict(BASELINE_DOC))


# One line per acceptance criterion, filled by tests/test_acceptance.py.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])

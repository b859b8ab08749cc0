import sys

import pytest
from hypothesis import HealthCheck, settings

from topopurity import GroundStateOracle, LatticeConfig, build_lattice, standard_partition
from topopurity.oracle import build_ground_state

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def lat12():
    return build_lattice(LatticeConfig(12, 2))


@pytest.fixture(scope="session")
def part12(lat12):
    return standard_partition(lat12)


@pytest.fixture(scope="session")
def ground12(lat12):
    return GroundStateOracle(lat12)


@pytest.fixture(scope="session")
def lat2():
    return build_lattice(LatticeConfig(2, 2))


@pytest.fixture(scope="session")
def state2(lat2):
    return build_ground_state(lat2)


@pytest.fixture(scope="session")
def lat3():
    return build_lattice(LatticeConfig(3, 2))


@pytest.fixture(scope="session")
def state3(lat3):
    return build_ground_state(lat3)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

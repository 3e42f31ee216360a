import csv
from pathlib import Path

import pytest

from brb_rap.benchmark import base_instance
from brb_rap.enumeration import build_subsystem_table
from brb_rap.model import ComponentOption, RapInstance, SubsystemSpec

FIXTURES = Path(__file__).parent / "fixtures"
DATA = Path(__file__).parents[1] / "src" / "brb_rap" / "data"
FYFFE_INSTANCE_PATH = DATA / "fyffe" / "instance.json"


def read_csv(name):
    with open(FIXTURES / name, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def fyffe():
    return base_instance()


@pytest.fixture(scope="session")
def fyffe_tables(fyffe):
    return [build_subsystem_table(s, i) for i, s in enumerate(fyffe.subsystems)]


@pytest.fixture
def toy():
    """Two single-option subsystems; every count pair fits the ceilings."""
    return RapInstance(
        (
            SubsystemSpec((ComponentOption(0.9, 1, 1),), 1, 2),
            SubsystemSpec((ComponentOption(0.8, 2, 2),), 1, 2),
        ),
        cost_ceiling=6,
        weight_ceiling=6,
    )


# Acceptance results collected across the session and echoed at the end.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

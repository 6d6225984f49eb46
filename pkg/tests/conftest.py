from pathlib import Path

import numpy as np
import pytest

from imaginet import MAZE5, OPEN5, TrainConfig, load_config, run

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


@pytest.fixture(scope="session")
def open5_run():
    return run(load_config(CONFIG_DIR / "open5.cfg"))


@pytest.fixture(scope="session")
def open5_model(open5_run):
    return open5_run[0]


@pytest.fixture(scope="session")
def maze5_run():
    return run(load_config(CONFIG_DIR / "maze5.cfg"))


@pytest.fixture(scope="session")
def maze5_model(maze5_run):
    return maze5_run[0]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_REPORT = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_REPORT:
        terminalreporter.write_line(line)

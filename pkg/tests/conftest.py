import os

import pytest

from plateau.scenarios import build_problem, load_scenario, run
from plateau.witness import build_witness_system

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "..", "scenarios")
SCENARIO_NAMES = (
    "disk3",
    "rings_tiny",
    "rings_d1",
    "rings_d3",
    "torus",
    "sphere_shell",
)


def scenario_path(name: str) -> str:
    return os.path.join(SCENARIO_DIR, f"{name}.json")


def load(name: str):
    return load_scenario(scenario_path(name))


@pytest.fixture(scope="session")
def disk_problem():
    return build_problem(load("disk3"))


@pytest.fixture(scope="session")
def disk_system(disk_problem):
    return build_witness_system(disk_problem)


@pytest.fixture(scope="session")
def tiny_problem():
    return build_problem(load("rings_tiny"))


@pytest.fixture(scope="session")
def tiny_system(tiny_problem):
    return build_witness_system(tiny_problem)


@pytest.fixture(scope="session")
def torus_problem():
    return build_problem(load("torus"))


@pytest.fixture(scope="session")
def scenario_runs():
    """One full pipeline run per shipped scenario, reused across tests."""
    out = {}
    for name in SCENARIO_NAMES:
        scenario = load(name)
        report, X = run(scenario)
        out[name] = (report, X, scenario)
    return out

import numpy as np
import pytest

from cli.settings_manager import DEFAULT_SETTINGS
from helper.abelian_group import parse_group
from helper.field_tower import build_tower


def pytest_addoption(parser):
    parser.addoption("--seed", action="store", type=int, default=DEFAULT_SETTINGS['tests']['seed'],
                     help="seed for randomised property tests")


@pytest.fixture
def rng(request):
    return np.random.default_rng(request.config.getoption("--seed"))


@pytest.fixture(scope="session")
def tower_4_9():
    return build_tower(4, 9)


@pytest.fixture(scope="session")
def z7():
    return parse_group("7")


@pytest.fixture(scope="session")
def z3_z9():
    return parse_group("3x9")

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.cyclotomic import get_field, get_modular_field, smallest_modulus
from app.schnizer import ModuleSpec, build_generators


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive runs over 625-dimensional modules or sampled B3/D4/D5 sweeps")


@pytest.fixture
def field5():
    return get_field(5)


@pytest.fixture
def modfield5():
    return get_modular_field(5, smallest_modulus(5))


@pytest.fixture
def a1_spec():
    return ModuleSpec("A", 1, 5, (3,))


@pytest.fixture
def a2_spec():
    return ModuleSpec("A", 2, 5, (2, 1))


@pytest.fixture
def c2_spec():
    return ModuleSpec("C", 2, 5, (3, 1))


@pytest.fixture
def a2_gens(a2_spec):
    return build_generators(a2_spec)


@pytest.fixture
def c2_gens(c2_spec):
    return build_generators(c2_spec)

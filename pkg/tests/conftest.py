"""Shared fixtures for the halgebra test suite."""
import random

import pytest

from halgebra.config import Settings, use_settings

import builders


@pytest.fixture(autouse=True, scope="session")
def default_settings():
    """Run every test with default settings, whatever the environment says."""
    with use_settings(Settings()) as settings:
        yield settings


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def crossed_module():
    return builders.crossed_module()


@pytest.fixture
def morphism(rng, crossed_module):
    return builders.random_morphism(rng, crossed_module)


@pytest.fixture
def homotopy(rng, morphism):
    return builders.random_homotopy(rng, morphism)


@pytest.fixture
def sl2():
    return builders.sl2()


@pytest.fixture
def heisenberg():
    return builders.heisenberg()


@pytest.fixture
def square_leibniz():
    return builders.square_leibniz()


@pytest.fixture
def heisenberg_module_algebra():
    return builders.heisenberg_module_algebra()

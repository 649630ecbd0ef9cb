"""
Shared scenario fixtures
"""

import pytest

from src.scenario import load_scenario


@pytest.fixture(scope="session")
def e3():
    return load_scenario("e3")


@pytest.fixture(scope="session")
def e4():
    return load_scenario("e4")


@pytest.fixture(scope="session")
def hor():
    return load_scenario("hor")


@pytest.fixture(scope="session")
def kim():
    return load_scenario("kim-r5")


@pytest.fixture(scope="session")
def anti():
    return load_scenario("anti-invariant-r5")


@pytest.fixture(scope="session")
def sphere():
    return load_scenario("sphere-radius")


@pytest.fixture(scope="session")
def mixed():
    return load_scenario("mixed-r7")

"""Pytest configuration and fixtures"""

import pytest
import yaml

from coxcat import examples
from coxcat.core.variety import variety_from_document
from coxcat.theta.collection import enumerate_theta
from coxcat.toric.gkz import secondary_fan


def _class_group(name):
    return variety_from_document(examples.variety(name)).class_group


@pytest.fixture(scope="session")
def h3():
    """Class group of the Hirzebruch surface ℋ₃"""
    return _class_group("H3")


@pytest.fixture(scope="session")
def h3_gkz(h3):
    return secondary_fan(h3)


@pytest.fixture(scope="session")
def h3_theta(h3):
    return enumerate_theta(h3)


@pytest.fixture(scope="session")
def flop():
    return _class_group("flop")


@pytest.fixture(scope="session")
def flop_gkz(flop):
    return secondary_fan(flop)


@pytest.fixture(scope="session")
def bl2p3():
    return _class_group("Bl2P3")


@pytest.fixture(scope="session")
def bl2p3_gkz(bl2p3):
    return secondary_fan(bl2p3)


@pytest.fixture
def stacky():
    """Stacky fan of a built-in example by name"""

    def build(name):
        return variety_from_document(examples.variety(name)).stacky

    return build


@pytest.fixture
def h3_input(tmp_path):
    """ℋ₃ written as a fan-mode YAML file"""
    path = tmp_path / "h3.yaml"
    path.write_text(yaml.safe_dump(examples.hirzebruch(3).model_dump(mode="json")))
    return path


@pytest.fixture
def p3_input(tmp_path):
    path = tmp_path / "p3.yaml"
    path.write_text(yaml.safe_dump(examples.projective_space(3).model_dump(mode="json")))
    return path

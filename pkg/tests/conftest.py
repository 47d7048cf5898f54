import pathlib

import pytest

from rxnflux.model import parse_model

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def reference_trace():
    return (DATA / "reference.trace").read_text()


@pytest.fixture(scope="session")
def diamond():
    """The 4-reaction branching model with a single initial A."""
    return parse_model((DATA / "diamond.rxn").read_text())


@pytest.fixture(scope="session")
def diamond4():
    """Same reactions, 4 initial A's (the population the reference trace uses)."""
    text = (DATA / "diamond.rxn").read_text().replace("init A * 1", "init A * 4")
    return parse_model(text)


@pytest.fixture(scope="session")
def rho():
    """Full Rho GTP-binding cycle with effector and GAP regulation."""
    return parse_model((DATA / "rho_gtp.rxn").read_text())


@pytest.fixture(scope="session")
def rho_reduced():
    """Reduced Rho model: spontaneous R/RD/RT interconversion only."""
    return parse_model((DATA / "rho_reduced.rxn").read_text())

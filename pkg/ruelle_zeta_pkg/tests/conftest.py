import os
from pathlib import Path

import pytest

from ruelle_zeta.geometry import DiscSystem
from ruelle_zeta.orbits import ConstantOne, find_orbit, orbit_weights
from ruelle_zeta.resonances import Rectangle, leading_resonance, scan
from ruelle_zeta.symbolic import PrimeCycle, enumerate_prime_cycles
from ruelle_zeta.zeta import build_expansion


@pytest.fixture(autouse=True)
def _restore_cwd(tmp_path, monkeypatch):
    # Ensure tests run from an isolated working directory
    original_cwd = Path.cwd()
    os.chdir(tmp_path)
    try:
        yield
    finally:
        os.chdir(original_cwd)


@pytest.fixture(scope="session")
def system6():
    return DiscSystem(6.0)


@pytest.fixture(scope="session")
def orbit_0(system6):
    return find_orbit(system6, PrimeCycle.from_word("0"))


@pytest.fixture(scope="session")
def orbit_1(system6):
    return find_orbit(system6, PrimeCycle.from_word("1"))


@pytest.fixture(scope="session")
def fundamental_orbits(system6):
    """All fundamental-domain prime cycles up to length 8 at d/r = 6."""
    return [find_orbit(system6, cycle) for cycle in enumerate_prime_cycles("fundamental", 8)]


@pytest.fixture(scope="session")
def unit_weights(system6, fundamental_orbits):
    return orbit_weights(system6, fundamental_orbits, ConstantOne())


@pytest.fixture(scope="session")
def expansions(fundamental_orbits):
    return [build_expansion(fundamental_orbits, k, 8) for k in (1, 2)]


@pytest.fixture(scope="session")
def low_resonances(expansions):
    return scan(expansions[:1], Rectangle(-1.0, 0.5, 0.0, 5.0), 0.25)


@pytest.fixture(scope="session")
def leading(low_resonances):
    return leading_resonance(low_resonances)

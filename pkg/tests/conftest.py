import os
import random

import pytest

from glv4.catalog import catalog_get, make_twist

P1 = 2**127 - 58309
SEED = int(os.environ.get("GLV4_SEED", "0x5EED4A11"), 0)


@pytest.fixture(scope="session")
def p1_instance():
    """The 254-bit working instance: twist of y^2 = x^3 + 9 over F_{p1^2}."""
    return make_twist(catalog_get("E2", P1))


@pytest.fixture()
def rng():
    return random.Random(SEED)

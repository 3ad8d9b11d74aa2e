import random

import pytest

from twostep.group import HEISENBERG


@pytest.fixture
def h3():
    return HEISENBERG


@pytest.fixture
def rng():
    return random.Random(1234)

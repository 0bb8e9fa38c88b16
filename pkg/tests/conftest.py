import random

import pytest
from hypothesis import settings

settings.register_profile("fesys", max_examples=30, deadline=None)
settings.load_profile("fesys")


@pytest.fixture
def rng():
    return random.Random(12345)

import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "sympal",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("sympal")


@pytest.fixture
def rng():
    return random.Random(20240601)

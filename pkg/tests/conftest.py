import random

import pytest
from hypothesis import strategies as st

from sualbp.generate import GeneratorConfig, random_instance
from sualbp.instance import make_instance


def instances(n_min=2, n_max=7, **kwargs):
    """Hypothesis strategy: random small instances drawn from a seeded generator."""
    cfg = GeneratorConfig(n_min=n_min, n_max=n_max, **kwargs)
    return st.integers(0, 2**32 - 1).map(lambda seed: random_instance(random.Random(seed), cfg))


@pytest.fixture
def three_tasks():
    # t = 3/4/5, task 1 before task 3, all forward setups 1, all backward setups 2
    tau = [[1] * 3 for _ in range(3)]
    mu = [[2] * 3 for _ in range(3)]
    return make_instance([3, 4, 5], [(0, 2)], tau, mu, cycle_time=12, station_count=2, name="three")

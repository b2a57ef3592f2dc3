import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bitten.space import Universe, example_space, tolerance_from_pairs

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def tolerances(draw, max_n: int = 5, min_n: int = 1):
    n = draw(st.integers(min_n, max_n))
    u = Universe.of([f"x{i + 1}" for i in range(n)])
    pairs = [(a, b) for i, a in enumerate(u.elements) for b in u.elements[i + 1:] if draw(st.booleans())]
    return tolerance_from_pairs(u, pairs)


def edge_pairs(T) -> list[tuple[int, int]]:
    u = T.universe
    return [(u.index(a), u.index(b)) for a, b in T.pairs()]


@pytest.fixture
def example():
    return example_space()


@pytest.fixture
def rng():
    return random.Random(0)

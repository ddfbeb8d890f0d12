import random

import pytest

from singularity_series import symfunc
from singularity_series.exactpoly import LaurentPoly
from singularity_series.gammamod import GermParams, fundamental_domain


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_poly(rng: random.Random, terms: int = 4, spread: int = 3, half: bool = False) -> LaurentPoly:
    step = 1 if half else 2
    out = {}
    for _ in range(terms):
        key = tuple(rng.randrange(-spread * 2, spread * 2 + 1, step) for _ in range(3))
        out[key] = rng.randint(-5, 5)
    return LaurentPoly(out)


@pytest.fixture(scope="module")
def cusp() -> GermParams:
    return GermParams(n=2, d=3)


@pytest.fixture(scope="module")
def p34() -> GermParams:
    return GermParams(n=3, d=4)


@pytest.fixture(scope="module")
def domain_34(p34):
    return fundamental_domain(p34)


@pytest.fixture(autouse=True)
def no_disk_cache():
    symfunc.use_cache(None)
    yield
    symfunc.use_cache(None)

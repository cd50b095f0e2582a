import numpy as np
import pytest

from semiop.harness import random_admissible, random_psd
from semiop.semi import SemiContext


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_ctx(d, rank, seed):
    return SemiContext.from_weight(random_psd(d, rank, seed))


def weight_cases():
    """(d, rank) pairs covering invertible and singular weights."""
    return [(1, 1), (2, 2), (2, 1), (3, 3), (3, 2), (3, 1), (4, 2)]


@pytest.fixture(params=weight_cases(), ids=lambda p: f"d{p[0]}r{p[1]}")
def ctx(request):
    d, r = request.param
    return random_ctx(d, r, seed=100 * d + r)


@pytest.fixture
def admissible(ctx):
    def make(seed):
        return random_admissible(ctx, seed)
    return make


A42 = np.array([[4.0, 2.0], [2.0, 1.0]])
T2142 = np.array([[2.0, 1.0], [4.0, 2.0]])


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[k])

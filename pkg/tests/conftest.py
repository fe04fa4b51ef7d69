import pytest

from config.settings import SieveConfig
from src.numtheory.primes import PrimeSieve

TEST_BOUND = 2 ** 26


@pytest.fixture(scope="session")
def sieve():
    """One shared sieve; large enough for every quick-tier workload."""
    return PrimeSieve(bound=TEST_BOUND, segment_length=2 ** 16, threads=2,
                      sieve_config=SieveConfig(checkpoint_stride=10 ** 6))


@pytest.fixture
def small_sieve():
    return PrimeSieve(bound=10 ** 6, segment_length=2 ** 12, threads=1,
                      sieve_config=SieveConfig(checkpoint_stride=10 ** 5))

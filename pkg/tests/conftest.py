import pytest

from dpcount.gw import GWEngine


@pytest.fixture(scope="session")
def engine():
    """Shared memoized engine; every operation on it is idempotent."""
    return GWEngine()

from functools import lru_cache

import pytest

from spanfib.fibcheck import SpanInstance
from spanfib.instances import BUILDERS


@lru_cache(maxsize=None)
def instance(name: str) -> SpanInstance:
    """Shared, lazily built span instance for a shipped suite entry."""
    return SpanInstance(*BUILDERS[name]().functor_triples())


@pytest.fixture
def get_instance():
    return instance

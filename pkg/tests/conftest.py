from functools import lru_cache

import pytest

from layered_catalan.monoid import build_universe


@lru_cache(maxsize=None)
def universe(n: int):
    return build_universe(n)


@pytest.fixture
def lc():
    """Cached LC_n universes: ``lc(5)``."""
    return universe

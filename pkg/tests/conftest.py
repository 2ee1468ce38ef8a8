"""Shared grids, symbols and fields."""

import numpy as np
import pytest
from hypothesis import settings

from polydecay.grid import GridSpec, sample
from polydecay.runtime import reset_executor
from polydecay.symbols import (
    PolyhomogeneousSymbol,
    benjamin_ono_symbol,
    power_term,
    symbol_from_coefficients,
)

settings.register_profile("numerics", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("numerics")


@pytest.fixture(scope="session", autouse=True)
def _shutdown_pool():
    yield
    reset_executor()


@pytest.fixture
def small_grid() -> GridSpec:
    return GridSpec(half_length=20.0, points=256)


@pytest.fixture
def periodic_grid() -> GridSpec:
    """Box of length 32π: cos(x) and sin(x) are exactly periodic on it."""
    return GridSpec(half_length=16 * np.pi, points=256)


@pytest.fixture
def bo_grid() -> GridSpec:
    return GridSpec(half_length=100.0, points=2**14)


@pytest.fixture
def bo_symbol() -> PolyhomogeneousSymbol:
    return benjamin_ono_symbol(1.0)


@pytest.fixture
def cubic_symbol() -> PolyhomogeneousSymbol:
    return symbol_from_coefficients([3, 3, 1])


@pytest.fixture
def fractional_symbol() -> PolyhomogeneousSymbol:
    """|ξ|^{3/2} + 1."""
    return PolyhomogeneousSymbol(1.0, (power_term(1.5),))


@pytest.fixture
def gaussian(small_grid):
    return sample(lambda x: np.exp(-0.5 * x**2), small_grid)

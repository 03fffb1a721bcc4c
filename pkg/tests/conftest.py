"""Shared fixtures: configurations at the three phase regimes and small grids."""

import math

import pytest

from src.confined_basis.service import PlaneWaveBasis
from src.core.config import SystemConfig, make_config
from src.core.grid import PositionGrid, build_grid

REFERENCE_GAMMA: float = 0.01


@pytest.fixture
def reference_config() -> SystemConfig:
    """gamma = 0.01 in natural units, default numerical controls."""
    return make_config({"gamma": REFERENCE_GAMMA})


@pytest.fixture
def pi_half_config() -> SystemConfig:
    return make_config({"gamma": math.pi / 2})


@pytest.fixture
def periodic_config() -> SystemConfig:
    return make_config({"gamma": 0.0})


@pytest.fixture
def small_pi_half_config() -> SystemConfig:
    return make_config({"gamma": "pi/2", "basis_cutoff": 64, "grid_points": 256})


@pytest.fixture
def grid_256() -> PositionGrid:
    return build_grid(256, 1.0)


@pytest.fixture
def grid_1024() -> PositionGrid:
    return build_grid(1024, 1.0)


@pytest.fixture
def small_pi_half_basis(small_pi_half_config: SystemConfig, grid_256: PositionGrid) -> PlaneWaveBasis:
    return PlaneWaveBasis(small_pi_half_config, grid_256)

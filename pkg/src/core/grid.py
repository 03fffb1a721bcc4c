"""Gauss-Legendre position grids on [-l, l]."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.config import MIN_GRID_POINTS
from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError
from src.logger import get_logger

logger = get_logger(__name__)


class PositionGrid(BaseModel):
    """Quadrature nodes and weights on (-l, l)."""

    nodes: np.ndarray = Field(description="Strictly increasing nodes, symmetric about 0")
    weights: np.ndarray = Field(description="Positive quadrature weights")
    length_l: float = Field(gt=0, description="Half-width of the interval")
    rule: str = Field(default="gauss-legendre", description="Quadrature rule tag")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _check(self) -> "PositionGrid":
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)
        return self

    @property
    def size(self) -> int:
        """Number of nodes."""
        return int(self.nodes.size)

    @property
    def grid_id(self) -> str:
        """Identifier used to match states against grids."""
        return f"{self.rule}:{self.size}:{self.length_l!r}"

    def integrate(self, values: np.ndarray) -> complex | float:
        """Quadrature sum of sampled values."""
        return np.sum(self.weights * values)

    def reflect(self, values: np.ndarray) -> np.ndarray:
        """Samples of f(-q) given samples of f(q)."""
        return values[::-1]


def build_grid(grid_points: int, length_l: float) -> PositionGrid:
    """
    Build Gauss-Legendre nodes and weights mapped to [-l, l].

    Nodes and weights are symmetrized explicitly so that reflection q -> -q maps
    the grid onto itself to the last bit.

    Args:
        grid_points: Number of nodes M
        length_l: Half-width l

    Returns:
        PositionGrid

    Raises:
        DomainError: If M is below the minimum
    """
    if grid_points < MIN_GRID_POINTS:
        raise DomainError(
            ErrorCode.DOMAIN_ERROR,
            f"grid needs at least {MIN_GRID_POINTS} points, got {grid_points}",
            {"grid_points": str(grid_points)},
        )

    x, w = np.polynomial.legendre.leggauss(grid_points)
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])

    return PositionGrid(
        nodes=length_l * x,
        weights=length_l * w,
        length_l=length_l,
    )

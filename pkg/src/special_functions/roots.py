"""Positive roots of the spectral equations by sign-change scan and bisection."""

import math
from collections.abc import Callable
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import optimize

from src.core.error_codes import ErrorCode
from src.core.exceptions import NumericalError
from src.logger import get_logger

logger = get_logger(__name__)

DEFAULT_SCAN_STEP: float = math.pi / 16
SCAN_START: float = 1e-9
BISECT_RTOL: float = 4 * np.finfo(float).eps


class EquationTag(str, Enum):
    """Which characteristic equation a root list solves."""

    GENERIC = "generic"
    PI_HALF_EVEN = "pi_half_even"
    PI_HALF_ODD = "pi_half_odd"
    PERIODIC_EVEN = "periodic_even"
    PERIODIC_ODD = "periodic_odd"
    TEST = "test"


class RootList(BaseModel):
    """Ascending positive roots of one characteristic equation."""

    roots: np.ndarray
    equation: EquationTag
    gamma: float | None = None
    achieved_tolerance: float = Field(ge=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def __len__(self) -> int:
        return int(self.roots.size)


def find_roots(
    function: Callable[[np.ndarray], np.ndarray],
    x_max: float,
    count: int,
    tolerance: float = 1e-12,
    *,
    equation: EquationTag = EquationTag.TEST,
    gamma: float | None = None,
    step: float = DEFAULT_SCAN_STEP,
    regularize: bool = True,
) -> RootList:
    """
    Locate the first ``count`` positive roots of ``function`` below ``x_max``.

    The (optionally x-regularized) function is sampled from SCAN_START in steps
    of ``step``; each sign change is refined with bisection.

    Args:
        function: Vectorized real function of x > 0
        x_max: Upper end of the scan interval
        count: Number of roots wanted
        tolerance: Absolute bisection tolerance
        equation: Tag stored on the result
        gamma: Boundary phase stored on the result
        step: Scan step
        regularize: Multiply by x so integrable x^-a poles do not stop the scan

    Returns:
        RootList with exactly ``count`` roots

    Raises:
        NumericalError: ROOTS_NOT_FOUND when fewer roots exist below x_max
    """
    if count < 1:
        raise ValueError("count must be positive")

    def scaled(x: np.ndarray | float) -> np.ndarray | float:
        values = function(x)
        return x * values if regularize else values

    n_steps: int = max(1, int(math.floor((x_max - SCAN_START) / step)))
    grid: np.ndarray = np.concatenate(([SCAN_START], step * np.arange(1, n_steps + 1)))
    grid = grid[grid <= x_max]
    values: np.ndarray = np.asarray(scaled(grid), dtype=float)

    roots: list[float] = []
    for i in range(grid.size - 1):
        if len(roots) == count:
            break
        left, right = values[i], values[i + 1]
        if left == 0.0:
            roots.append(float(grid[i]))
        elif left * right < 0.0:
            root: float = optimize.bisect(
                lambda x: float(scaled(x)), grid[i], grid[i + 1], xtol=tolerance, rtol=BISECT_RTOL
            )
            roots.append(root)

    if len(roots) < count:
        logger.warning("Root scan came up short", equation=equation.value, found=len(roots), wanted=count)
        raise NumericalError(
            ErrorCode.ROOTS_NOT_FOUND,
            f"found {len(roots)} of {count} roots below x = {x_max:g}",
            {"found": str(len(roots)), "wanted": str(count)},
        )

    result = np.array(roots[:count])
    result.setflags(write=False)
    achieved: float = tolerance + BISECT_RTOL * float(result[-1])
    logger.debug("Roots located", equation=equation.value, count=count, largest=float(result[-1]))
    return RootList(roots=result, equation=equation, gamma=gamma, achieved_tolerance=achieved)

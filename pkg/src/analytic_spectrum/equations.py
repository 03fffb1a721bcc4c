"""Characteristic equations whose positive roots fix the analytic spectrum."""

import math
from enum import Enum

import numpy as np

from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError
from src.special_functions.bessel import BesselOrder, bessel_j
from src.special_functions.roots import EquationTag

J = BesselOrder


class SpectralCase(str, Enum):
    """Eigenfunction family selected by the boundary phase."""

    GENERIC = "generic"
    PI_HALF = "pi_half"
    PERIODIC = "periodic"

    @classmethod
    def for_gamma(cls, gamma: float) -> "SpectralCase":
        if gamma == 0.0:
            return cls.PERIODIC
        if abs(abs(gamma) - math.pi / 2) <= 1e-15:
            return cls.PI_HALF
        return cls.GENERIC


class Family(str, Enum):
    """Sub-equation of the parity-split cases."""

    EVEN = "even"
    ODD = "odd"
    MERGED = "merged"


def _generic(x: np.ndarray, gamma: float) -> np.ndarray:
    s2: float = math.sin(gamma) ** 2
    c2: float = math.cos(gamma) ** 2
    return s2 * bessel_j(J.MINUS_THREE_QUARTERS, x) * bessel_j(J.MINUS_ONE_QUARTER, x) - c2 * bessel_j(
        J.THREE_QUARTERS, x
    ) * bessel_j(J.ONE_QUARTER, x)


def _pi_half_even(x: np.ndarray) -> np.ndarray:
    return bessel_j(J.MINUS_THREE_QUARTERS, x)


def _odd(x: np.ndarray) -> np.ndarray:
    return bessel_j(J.MINUS_ONE_QUARTER, x)


def _periodic_even(x: np.ndarray) -> np.ndarray:
    return (
        bessel_j(J.MINUS_THREE_QUARTERS, x)
        + (2.0 / 3.0) * bessel_j(J.FIVE_QUARTERS, x)
        + bessel_j(J.ONE_QUARTER, x) / x
    )


def characteristic_value(
    x: np.ndarray | float,
    case: SpectralCase,
    gamma: float = 0.0,
    family: Family = Family.MERGED,
) -> np.ndarray | float:
    """
    Characteristic function of ``case``; its positive zeros are the roots r_n.

    The generic equation is multiplied through by sin^2(gamma) so it stays
    bounded as gamma -> 0 and reduces to J_{-3/4} J_{-1/4} at pi/2.

    Args:
        x: Positive argument(s)
        case: Spectral case
        gamma: Boundary phase (generic case only)
        family: Even, odd or merged sub-equation (pi_half and periodic only)

    Returns:
        Function value(s)

    Raises:
        DomainError: If x <= 0
    """
    if np.any(np.asarray(x) <= 0.0):
        raise DomainError(ErrorCode.DOMAIN_ERROR, "characteristic functions need x > 0")
    if case is SpectralCase.GENERIC:
        return _generic(x, gamma)
    even = _pi_half_even(x) if case is SpectralCase.PI_HALF else _periodic_even(x)
    if family is Family.EVEN:
        return even
    if family is Family.ODD:
        return _odd(x)
    return even * _odd(x)


def equation_tag(case: SpectralCase, family: Family) -> EquationTag:
    """Root-list tag of a (case, family) sub-equation."""
    if case is SpectralCase.GENERIC:
        return EquationTag.GENERIC
    if case is SpectralCase.PI_HALF:
        return EquationTag.PI_HALF_EVEN if family is Family.EVEN else EquationTag.PI_HALF_ODD
    return EquationTag.PERIODIC_EVEN if family is Family.EVEN else EquationTag.PERIODIC_ODD

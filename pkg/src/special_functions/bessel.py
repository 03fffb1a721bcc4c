"""Bessel functions of the first kind for quarter-integer orders."""

from enum import Enum

import numpy as np
from scipy import special

from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError

MAX_ARGUMENT: float = 500.0
SMALL_ARGUMENT: float = 1e-6


class BesselOrder(float, Enum):
    """Orders appearing in the eigenfunctions and the root equations."""

    MINUS_THREE_QUARTERS = -0.75
    MINUS_ONE_QUARTER = -0.25
    ONE_QUARTER = 0.25
    THREE_QUARTERS = 0.75
    FIVE_QUARTERS = 1.25

    @classmethod
    def of(cls, value: "float | BesselOrder") -> "BesselOrder":
        """
        Look up a supported order.

        Raises:
            DomainError: If the order is not one of the five supported values
        """
        try:
            return cls(float(value))
        except ValueError as e:
            raise DomainError(
                ErrorCode.UNSUPPORTED_ORDER,
                f"Bessel order {value} is not supported",
                {"order": str(value)},
            ) from e


def _jv(order: float, x: np.ndarray | float) -> np.ndarray | float:
    return special.jv(order, x)


def bessel_j(order: "float | BesselOrder", x: np.ndarray | float) -> np.ndarray | float:
    """
    J_nu(x) for a supported order and 0 < x <= 500.

    Args:
        order: One of -3/4, -1/4, 1/4, 3/4, 5/4
        x: Positive argument(s)

    Returns:
        J_nu(x), same shape as x

    Raises:
        DomainError: If the order is unsupported or x is outside (0, 500]
    """
    nu: BesselOrder = BesselOrder.of(order)
    values = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0) or np.any(values > MAX_ARGUMENT):
        raise DomainError(
            ErrorCode.DOMAIN_ERROR,
            f"bessel_j needs 0 < x <= {MAX_ARGUMENT:g}",
            {"order": str(nu.value)},
        )
    return _jv(nu.value, x)


def bessel_pair(nu: float, rho: float, x: np.ndarray, sign: int) -> np.ndarray:
    """
    x^nu (J_{-nu}(x) + sign * i J_rho(x)) for x >= 0.

    The negative-order factor diverges at x = 0 while the product stays finite;
    below SMALL_ARGUMENT the two-term power series of the product is used.

    Args:
        nu: Power and (negated) order of the first factor
        rho: Order of the second factor, rho > -nu
        x: Nonnegative arguments
        sign: +1 or -1

    Returns:
        Complex values, same shape as x
    """
    shape = np.shape(x)
    x = np.asarray(x, dtype=float).reshape(-1)
    result = np.empty(x.shape, dtype=complex)
    small = x < SMALL_ARGUMENT
    large = ~small

    xl = x[large]
    result[large] = xl**nu * (_jv(-nu, xl) + sign * 1j * _jv(rho, xl))

    xs = x[small]
    half_sq = (0.5 * xs) ** 2
    first = 2.0**nu * (1.0 / special.gamma(1.0 - nu) - half_sq / special.gamma(2.0 - nu))
    second = (
        xs ** (nu + rho)
        * 2.0 ** (-rho)
        * (1.0 / special.gamma(1.0 + rho) - half_sq / special.gamma(2.0 + rho))
    )
    result[small] = first + sign * 1j * second
    return result.reshape(shape)

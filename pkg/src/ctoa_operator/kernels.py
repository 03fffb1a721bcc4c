"""Integral kernels of the confined time-of-arrival operator."""

import math
from enum import Enum

import numpy as np

from src.core.config import SystemConfig
from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError


class KernelKind(str, Enum):
    """Nonperiodic kernel for gamma != 0, periodic kernel for gamma = 0."""

    NONPERIODIC = "nonperiodic"
    PERIODIC = "periodic"

    @classmethod
    def for_gamma(cls, gamma: float) -> "KernelKind":
        return cls.PERIODIC if gamma == 0.0 else cls.NONPERIODIC


def _require_kind(kind: KernelKind, config: SystemConfig) -> None:
    if kind is KernelKind.NONPERIODIC and math.sin(config.gamma) == 0.0:
        raise DomainError(
            ErrorCode.DOMAIN_ERROR,
            "the nonperiodic kernel needs sin(gamma) != 0; use the periodic kernel at gamma = 0",
            {"gamma": repr(config.gamma)},
        )


def kernel_nonperiodic(q: np.ndarray | float, qp: np.ndarray | float, config: SystemConfig) -> np.ndarray:
    """
    -mu (q + q') / (4 hbar sin g) * (e^{ig} H(q - q') + e^{-ig} H(q' - q)), H(0) = 1/2.

    Broadcasts over q and q'.

    Raises:
        DomainError: At gamma = 0
    """
    _require_kind(KernelKind.NONPERIODIC, config)
    q = np.asarray(q, dtype=float)
    qp = np.asarray(qp, dtype=float)
    gamma: float = config.gamma
    step = np.heaviside(q - qp, 0.5)
    prefactor = -config.mass_mu * (q + qp) / (4.0 * config.hbar * math.sin(gamma))
    return prefactor * (np.exp(1j * gamma) * step + np.exp(-1j * gamma) * (1.0 - step))


def kernel_periodic(q: np.ndarray | float, qp: np.ndarray | float, config: SystemConfig) -> np.ndarray:
    """(mu / 4i hbar)(q + q') sgn(q - q') - (mu / 4i hbar l)(q^2 - q'^2), sgn(0) = 0."""
    q = np.asarray(q, dtype=float)
    qp = np.asarray(qp, dtype=float)
    scale: complex = config.mass_mu / (4j * config.hbar)
    return scale * ((q + qp) * np.sign(q - qp) - (q**2 - qp**2) / config.length_l)


def kernel(kind: KernelKind, q: np.ndarray | float, qp: np.ndarray | float, config: SystemConfig) -> np.ndarray:
    """Dispatch on kernel kind."""
    if kind is KernelKind.PERIODIC:
        return kernel_periodic(q, qp, config)
    return kernel_nonperiodic(q, qp, config)


def kernel_row_integral(kind: KernelKind, q: np.ndarray, config: SystemConfig) -> np.ndarray:
    """Closed form of the row integral over q' in [-l, l] of kernel(q, q')."""
    q = np.asarray(q, dtype=float)
    l: float = config.length_l
    if kind is KernelKind.PERIODIC:
        return config.mass_mu / (4j * config.hbar) * (q**2 - l**2 / 3.0)
    _require_kind(kind, config)
    gamma: float = config.gamma
    below = 0.5 * (q + l) * (3.0 * q - l)
    above = 0.5 * (l - q) * (3.0 * q + l)
    prefactor: float = -config.mass_mu / (4.0 * config.hbar * math.sin(gamma))
    return prefactor * (np.exp(1j * gamma) * below + np.exp(-1j * gamma) * above)


def kernel_squared_diagonal(kind: KernelKind, q: np.ndarray, config: SystemConfig) -> np.ndarray:
    """Continuous limit of |kernel(q, q')|^2 as q' -> q."""
    q = np.asarray(q, dtype=float)
    if kind is KernelKind.PERIODIC:
        return (config.mass_mu * q / (2.0 * config.hbar)) ** 2
    _require_kind(kind, config)
    return (config.mass_mu * q / (2.0 * config.hbar * math.sin(config.gamma))) ** 2

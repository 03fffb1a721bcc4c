"""Plane-wave eigenbasis of p_gamma, kinetic energies and basis transforms."""

import math

import numpy as np

from src.confined_basis.schemas import MomentumIndexSet
from src.core.config import SystemConfig
from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError, NumericalError
from src.core.grid import PositionGrid
from src.core.schemas import Representation, StateVector
from src.logger import get_logger

logger = get_logger(__name__)


def _check_null_mode(n: int, config: SystemConfig) -> None:
    if config.gamma == 0.0 and n == 0:
        raise DomainError(
            ErrorCode.NULL_MODE,
            "n = 0 is the null mode of the periodic momentum and has no eigenvalue here",
            {"n": "0"},
        )


def wavenumber(n: int | np.ndarray, config: SystemConfig) -> float | np.ndarray:
    """k_n = (gamma + n pi) / l."""
    return (config.gamma + np.asarray(n) * math.pi) / config.length_l


def momentum_eigenvalue(n: int, config: SystemConfig) -> float:
    """
    p_n = hbar (gamma + n pi) / l.

    Raises:
        DomainError: NULL_MODE for n = 0 at gamma = 0
    """
    _check_null_mode(n, config)
    return float(config.hbar * wavenumber(n, config))


def energy_eigenvalue(n: int, config: SystemConfig) -> float:
    """
    E_n = p_n^2 / (2 mu).

    Raises:
        DomainError: NULL_MODE for n = 0 at gamma = 0
    """
    p: float = momentum_eigenvalue(n, config)
    return p**2 / (2.0 * config.mass_mu)


def basis_function(n: int, q: np.ndarray | float, config: SystemConfig) -> np.ndarray | complex:
    """
    Plane wave (2l)^(-1/2) exp(i p_n q / hbar).

    Args:
        n: Label
        q: Position(s) in [-l, l]
        config: System configuration

    Returns:
        Complex value(s), same shape as q
    """
    k: float = float(wavenumber(n, config))
    return np.exp(1j * k * np.asarray(q)) / math.sqrt(2.0 * config.length_l)


def momenta(index_set: MomentumIndexSet, config: SystemConfig) -> np.ndarray:
    """p_n over the index set; the null mode at gamma = 0 carries 0."""
    return config.hbar * wavenumber(index_set.indices, config)


def inverse_momenta(index_set: MomentumIndexSet, config: SystemConfig) -> np.ndarray:
    """1/p_n over the index set, with 0 on the null mode (pseudo-inverse)."""
    p: np.ndarray = momenta(index_set, config)
    result: np.ndarray = np.zeros_like(p)
    nonzero = p != 0.0
    result[nonzero] = 1.0 / p[nonzero]
    return result


def energies(index_set: MomentumIndexSet, config: SystemConfig) -> np.ndarray:
    """E_n over the index set (E_0 = 0 on the null mode)."""
    return momenta(index_set, config) ** 2 / (2.0 * config.mass_mu)


def build_index_set(config: SystemConfig, cutoff: int | None = None) -> MomentumIndexSet:
    """Index window for ``cutoff`` (defaults to config.basis_cutoff)."""
    return MomentumIndexSet.build(cutoff or config.basis_cutoff, config.gamma)


class PlaneWaveBasis:
    """
    Plane waves sampled on a grid, shared by transforms and time sampling.

    The grid x index matrix is built once per basis.
    """

    def __init__(
        self,
        config: SystemConfig,
        grid: PositionGrid,
        cutoff: int | None = None,
    ):
        """
        Initialize basis.

        Args:
            config: System configuration
            grid: Quadrature grid on [-l, l]
            cutoff: Truncation N (defaults to config.basis_cutoff)
        """
        if grid.length_l != config.length_l:
            raise DomainError(
                ErrorCode.REPRESENTATION_MISMATCH,
                "grid and configuration disagree on l",
                {"grid": grid.grid_id},
            )
        self.config = config
        self.grid = grid
        self.index_set = build_index_set(config, cutoff)
        self.momenta = momenta(self.index_set, config)
        self.energies = energies(self.index_set, config)
        k: np.ndarray = wavenumber(self.index_set.indices, config)
        self.matrix: np.ndarray = np.exp(1j * np.outer(grid.nodes, k)) / math.sqrt(2.0 * config.length_l)
        self.matrix.setflags(write=False)
        logger.debug(
            "Plane-wave basis built",
            gamma=config.gamma,
            dimension=self.index_set.size,
            grid_points=grid.size,
        )

    @property
    def basis_id(self) -> str:
        return self.index_set.basis_id

    def _require(self, state: StateVector, representation: Representation, basis_id: str) -> None:
        if state.representation is not representation or state.basis_id != basis_id:
            raise NumericalError(
                ErrorCode.REPRESENTATION_MISMATCH,
                f"expected a {representation.value} state on '{basis_id}'",
                {"state": state.basis_id, "expected": basis_id},
            )

    def to_momentum(self, state: StateVector) -> StateVector:
        """
        Coefficients c_n = <phi_n|psi> by quadrature.

        Raises:
            NumericalError: REPRESENTATION_MISMATCH if the state is not sampled on this grid
        """
        self._require(state, Representation.POSITION_SAMPLED, self.grid.grid_id)
        coefficients: np.ndarray = self.matrix.conj().T @ (self.grid.weights * state.amplitudes)
        result: StateVector = StateVector.coefficients(coefficients, self.basis_id)
        logger.debug("Projected onto plane waves", parseval_defect=state.norm**2 - result.norm**2)
        return result

    def parseval_defect(self, state: StateVector) -> float:
        """||psi||^2 - sum |c_n|^2 for a sampled state."""
        return state.norm**2 - self.to_momentum(state).norm**2

    def to_position(self, state: StateVector) -> StateVector:
        """
        Samples psi(q_i) = sum_n c_n phi_n(q_i).

        Raises:
            NumericalError: REPRESENTATION_MISMATCH for foreign coefficient vectors
        """
        self._require(state, Representation.MOMENTUM_COEFFICIENTS, self.basis_id)
        return StateVector.sampled(self.matrix @ state.amplitudes, self.grid)

    def evaluate(self, coefficients: np.ndarray, q: np.ndarray | float) -> np.ndarray:
        """Sum_n c_n phi_n(q) at arbitrary positions."""
        k: np.ndarray = wavenumber(self.index_set.indices, self.config)
        waves = np.exp(1j * np.multiply.outer(np.asarray(q, dtype=float), k))
        return waves @ coefficients / math.sqrt(2.0 * self.config.length_l)

    def reflect(self, state: StateVector) -> StateVector | None:
        """Coefficients of psi(-q), or None if the phase is not reflection-symmetric."""
        permutation = self.index_set.reflection()
        if permutation is None:
            return None
        return state.with_amplitudes(state.amplitudes[permutation])


def to_momentum(state: StateVector, basis: PlaneWaveBasis) -> StateVector:
    """Module-level alias of PlaneWaveBasis.to_momentum."""
    return basis.to_momentum(state)


def to_position(state: StateVector, basis: PlaneWaveBasis) -> StateVector:
    """Module-level alias of PlaneWaveBasis.to_position."""
    return basis.to_position(state)

"""Matrix realizations of the CTOA operator and their diagonalization."""

import math
from typing import Literal

import numpy as np
from scipy import linalg

from src.confined_basis.schemas import MomentumIndexSet
from src.confined_basis.service import build_index_set, inverse_momenta
from src.core.config import SystemConfig
from src.core.error_codes import ErrorCode
from src.core.exceptions import NumericalError
from src.core.grid import PositionGrid
from src.core.schemas import (
    BasisKind,
    Branch,
    EigenPair,
    HermitianOperatorMatrix,
    Parity,
    Representation,
    StateVector,
)
from src.ctoa_operator.kernels import (
    KernelKind,
    kernel,
    kernel_row_integral,
    kernel_squared_diagonal,
)
from src.logger import get_logger

logger = get_logger(__name__)

ZERO_EIGENVALUE_FLOOR: float = 1e-10
DEGENERACY_TOLERANCE: float = 1e-10


def parity_symmetric(gamma: float) -> bool:
    """True for the phases 0 and +-pi/2, where the operator commutes with q -> -q."""
    return gamma == 0.0 or abs(abs(gamma) - math.pi / 2) <= 1e-15


def position_matrix(index_set: MomentumIndexSet, length_l: float) -> np.ndarray:
    """
    Q_mn = <phi_m|q|phi_n> in closed form.

    Q_nn = 0 and Q_mn = i l (-1)^(n-m) / ((m - n) pi) otherwise.
    """
    n: np.ndarray = index_set.indices
    diff: np.ndarray = n[:, None] - n[None, :]
    sign: np.ndarray = np.where(diff % 2 == 0, 1.0, -1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        entries = 1j * length_l * sign / (diff * math.pi)
    np.fill_diagonal(entries, 0.0)
    return entries


def spectral_entries(config: SystemConfig, cutoff: int | None = None) -> np.ndarray:
    """
    T_mn = -(mu/2)(1/p_m + 1/p_n) Q_mn as assembled, before symmetrization.

    At gamma = 0 the inverse momentum is the pseudo-inverse (0 on the null mode).
    """
    index_set: MomentumIndexSet = build_index_set(config, cutoff)
    inverse: np.ndarray = inverse_momenta(index_set, config)
    return (
        -0.5 * config.mass_mu * (inverse[:, None] + inverse[None, :]) * position_matrix(index_set, config.length_l)
    )


def nystrom_entries(config: SystemConfig, grid: PositionGrid, kind: KernelKind | None = None) -> np.ndarray:
    """sqrt(w_i) K(q_i, q_j) sqrt(w_j) as assembled, before symmetrization."""
    kind = kind or KernelKind.for_gamma(config.gamma)
    sqrt_weights: np.ndarray = np.sqrt(grid.weights)
    values: np.ndarray = kernel(kind, grid.nodes[:, None], grid.nodes[None, :], config)
    return sqrt_weights[:, None] * values * sqrt_weights[None, :]


def matrix_spectral(config: SystemConfig, cutoff: int | None = None) -> HermitianOperatorMatrix:
    """
    CTOA operator in the plane-wave basis; see spectral_entries.

    Args:
        config: System configuration
        cutoff: Truncation N (defaults to config.basis_cutoff)

    Returns:
        HermitianOperatorMatrix in the momentum_spectral basis
    """
    index_set: MomentumIndexSet = build_index_set(config, cutoff)
    entries: np.ndarray = spectral_entries(config, cutoff)
    reflection = index_set.reflection() if parity_symmetric(config.gamma) else None
    logger.info("Spectral matrix assembled", gamma=config.gamma, dimension=index_set.size)
    return HermitianOperatorMatrix(
        basis=BasisKind.MOMENTUM_SPECTRAL,
        basis_id=index_set.basis_id,
        entries=entries,
        reflection=reflection,
    )


def matrix_nystrom(
    config: SystemConfig,
    grid: PositionGrid,
    kind: KernelKind | None = None,
) -> HermitianOperatorMatrix:
    """
    Symmetrized Nystrom matrix sqrt(w_i) K(q_i, q_j) sqrt(w_j).

    Args:
        config: System configuration
        grid: Quadrature grid
        kind: Kernel kind; defaults to the one matching gamma

    Returns:
        HermitianOperatorMatrix in the position_nystrom basis
    """
    kind = kind or KernelKind.for_gamma(config.gamma)
    sqrt_weights: np.ndarray = np.sqrt(grid.weights)
    entries: np.ndarray = nystrom_entries(config, grid, kind)
    reflection = np.arange(grid.size)[::-1].copy() if parity_symmetric(config.gamma) else None
    logger.info("Nystrom matrix assembled", gamma=config.gamma, kind=kind.value, dimension=grid.size)
    return HermitianOperatorMatrix(
        basis=BasisKind.POSITION_NYSTROM,
        basis_id=grid.grid_id,
        entries=entries,
        sqrt_weights=sqrt_weights,
        reflection=reflection,
    )


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    k: int = int(np.argmax(np.abs(vector)))
    return vector * (np.conj(vector[k]) / abs(vector[k]))


def _parity_of(vector: np.ndarray, reflection: np.ndarray | None) -> Parity:
    if reflection is None:
        return Parity.NONE
    mirrored: np.ndarray = vector[reflection]
    return Parity.EVEN if np.linalg.norm(vector - mirrored) <= np.linalg.norm(vector + mirrored) else Parity.ODD


def _ordered(values: np.ndarray, parities: list[Parity]) -> list[int]:
    """Positions sorted by decreasing |value|; near-ties put even before odd."""
    order: list[int] = sorted(range(values.size), key=lambda i: -abs(values[i]))
    scale: float = float(np.max(np.abs(values))) if values.size else 0.0
    for i in range(len(order) - 1):
        a, b = order[i], order[i + 1]
        if abs(abs(values[a]) - abs(values[b])) <= DEGENERACY_TOLERANCE * scale:
            if parities[a] is Parity.ODD and parities[b] is Parity.EVEN:
                order[i], order[i + 1] = b, a
    return order


def _as_state(matrix: HermitianOperatorMatrix, vector: np.ndarray) -> StateVector:
    if matrix.basis is BasisKind.POSITION_NYSTROM:
        return StateVector(
            representation=Representation.POSITION_SAMPLED,
            basis_id=matrix.basis_id,
            amplitudes=vector / matrix.sqrt_weights,
            weights=matrix.sqrt_weights**2,
        )
    return StateVector.coefficients(vector, matrix.basis_id)


def diagonalize(matrix: HermitianOperatorMatrix) -> list[EigenPair]:
    """
    Eigenpairs paired into (plus, minus) branches by decreasing |eigenvalue|.

    Eigenvalues below ZERO_EIGENVALUE_FLOOR relative to the largest one (the
    null direction of odd-dimensional truncations) are dropped. Each eigenvector
    is phase fixed so its largest component is real positive.

    Args:
        matrix: Hermitian operator matrix

    Returns:
        Pairs ordered as plus_1, minus_1, plus_2, minus_2, ...

    Raises:
        NumericalError: EIGENSOLVER_FAILURE if the solver does not converge
    """
    try:
        eigenvalues, eigenvectors = linalg.eigh(matrix.entries)
    except (linalg.LinAlgError, ValueError) as e:
        logger.warning("Eigensolver failed", basis=matrix.basis.value, dimension=matrix.dimension)
        raise NumericalError(
            ErrorCode.EIGENSOLVER_FAILURE,
            f"eigensolver failed on a {matrix.dimension}x{matrix.dimension} matrix: {e}",
        ) from e

    scale: float = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    vectors: list[np.ndarray] = [_fix_phase(eigenvectors[:, i]) for i in range(eigenvalues.size)]
    parities: list[Parity] = [_parity_of(v, matrix.reflection) for v in vectors]

    kept = np.abs(eigenvalues) > ZERO_EIGENVALUE_FLOOR * scale
    positive: list[int] = [i for i in _ordered(eigenvalues, parities) if kept[i] and eigenvalues[i] > 0]
    negative: list[int] = [i for i in _ordered(eigenvalues, parities) if kept[i] and eigenvalues[i] < 0]
    if len(positive) != len(negative):
        logger.warning("Unpaired eigenvalues dropped", plus=len(positive), minus=len(negative))

    pairs: list[EigenPair] = []
    for rank, (i_plus, i_minus) in enumerate(zip(positive, negative), start=1):
        for index, branch in ((i_plus, Branch.PLUS), (i_minus, Branch.MINUS)):
            pairs.append(
                EigenPair(
                    eigenvalue=float(eigenvalues[index]),
                    eigenfunction=_as_state(matrix, vectors[index]),
                    quantum_number=rank,
                    branch=branch,
                    parity=parities[index],
                )
            )

    logger.info("Operator diagonalized", basis=matrix.basis.value, dimension=matrix.dimension, pairs=len(pairs) // 2)
    return pairs


def eigenvalues_by_branch(pairs: list[EigenPair], branch: Branch = Branch.PLUS) -> np.ndarray:
    """Eigenvalues of one branch in quantum-number order."""
    return np.array([pair.eigenvalue for pair in pairs if pair.branch is branch])


def hilbert_schmidt_norm(
    kind: KernelKind,
    config: SystemConfig,
    grid: PositionGrid,
    diagonal: Literal["limit", "nystrom"] = "limit",
) -> float:
    """
    Quadrature estimate of the double integral of |kernel|^2 (the squared
    Hilbert-Schmidt norm).

    Args:
        kind: Kernel kind
        config: System configuration
        grid: Quadrature grid
        diagonal: "limit" uses the continuous limit of |kernel|^2 on q = q';
            "nystrom" uses the H(0) = 1/2 kernel values, so the result equals the
            squared Frobenius norm of the Nystrom matrix

    Returns:
        Nonnegative estimate, scaling as (mu l^2 / hbar)^2
    """
    values: np.ndarray = np.abs(kernel(kind, grid.nodes[:, None], grid.nodes[None, :], config)) ** 2
    if diagonal == "limit":
        np.fill_diagonal(values, kernel_squared_diagonal(kind, grid.nodes, config))
    return float(grid.weights @ values @ grid.weights)


def apply_kernel(
    kind: KernelKind,
    samples: np.ndarray,
    grid: PositionGrid,
    config: SystemConfig,
) -> np.ndarray:
    """
    (T phi)(q_i) with the jump of the kernel handled by singularity subtraction.

    Computes sum_j w_j K(q_i, q_j)(phi_j - phi_i) + phi_i * integral K(q_i, q') dq'.

    Args:
        kind: Kernel kind
        samples: phi at the grid nodes
        grid: Quadrature grid
        config: System configuration

    Returns:
        Samples of T phi at the grid nodes
    """
    samples = np.asarray(samples, dtype=complex)
    values: np.ndarray = kernel(kind, grid.nodes[:, None], grid.nodes[None, :], config)
    differences: np.ndarray = samples[None, :] - samples[:, None]
    return (values * differences) @ grid.weights + samples * kernel_row_integral(kind, grid.nodes, config)

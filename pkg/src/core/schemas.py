"""Shared state, operator and eigenpair types."""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.error_codes import ErrorCode
from src.core.exceptions import NumericalError
from src.core.grid import PositionGrid
from src.logger import get_logger

logger = get_logger(__name__)

HERMITICITY_TOLERANCE: float = 1e-10


class Representation(str, Enum):
    """How a StateVector stores its amplitudes."""

    POSITION_SAMPLED = "position_sampled"
    MOMENTUM_COEFFICIENTS = "momentum_coefficients"


class BasisKind(str, Enum):
    """Basis in which an operator matrix is expressed."""

    MOMENTUM_SPECTRAL = "momentum_spectral"
    POSITION_NYSTROM = "position_nystrom"


class Branch(str, Enum):
    """Sign of the eigenvalue."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    NONE = "none"


class NodalTag(str, Enum):
    NODAL = "nodal"
    NON_NODAL = "non_nodal"


class StateVector(BaseModel):
    """
    Wavefunction of the confined particle.

    Position-sampled states carry the quadrature weights of their grid so the
    norm is the quadrature norm; coefficient states carry unit weights.
    """

    representation: Representation
    basis_id: str = Field(description="Grid id or momentum index-set id")
    amplitudes: np.ndarray
    weights: np.ndarray
    norm: float = Field(default=0.0, ge=0, description="Cached norm, recomputed on construction")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="before")
    @classmethod
    def _cache_norm(cls, data: dict) -> dict:
        amplitudes = np.array(data["amplitudes"], dtype=complex)
        weights = np.array(data["weights"], dtype=float)
        if amplitudes.shape != weights.shape:
            raise ValueError("amplitudes and weights must have the same shape")
        amplitudes.setflags(write=False)
        weights.setflags(write=False)
        return {
            **data,
            "amplitudes": amplitudes,
            "weights": weights,
            "norm": float(np.sqrt(np.sum(weights * np.abs(amplitudes) ** 2))),
        }

    @classmethod
    def sampled(cls, amplitudes: np.ndarray, grid: PositionGrid) -> "StateVector":
        """State sampled on a PositionGrid."""
        return cls(
            representation=Representation.POSITION_SAMPLED,
            basis_id=grid.grid_id,
            amplitudes=amplitudes,
            weights=grid.weights,
        )

    @classmethod
    def coefficients(cls, amplitudes: np.ndarray, basis_id: str) -> "StateVector":
        """State given by momentum-basis coefficients."""
        amplitudes = np.asarray(amplitudes, dtype=complex)
        return cls(
            representation=Representation.MOMENTUM_COEFFICIENTS,
            basis_id=basis_id,
            amplitudes=amplitudes,
            weights=np.ones(amplitudes.shape),
        )

    def with_amplitudes(self, amplitudes: np.ndarray) -> "StateVector":
        """Same representation and basis, new amplitudes."""
        return StateVector(
            representation=self.representation,
            basis_id=self.basis_id,
            amplitudes=amplitudes,
            weights=self.weights,
        )

    def normalize(self) -> "StateVector":
        """
        Scale to unit norm.

        Raises:
            NumericalError: If the state has zero norm
        """
        if self.norm == 0.0 or not np.isfinite(self.norm):
            raise NumericalError(ErrorCode.ZERO_NORM, "cannot normalize a zero-norm state")
        return self.with_amplitudes(self.amplitudes / self.norm)

    def inner(self, other: "StateVector") -> complex:
        """<self|other> in the shared representation."""
        if self.basis_id != other.basis_id or self.representation != other.representation:
            raise NumericalError(
                ErrorCode.REPRESENTATION_MISMATCH,
                "inner product needs states in the same basis",
                {"left": self.basis_id, "right": other.basis_id},
            )
        return complex(np.sum(self.weights * np.conj(self.amplitudes) * other.amplitudes))


class HermitianOperatorMatrix(BaseModel):
    """Finite truncation of an operator; Hermitian by construction."""

    basis: BasisKind
    basis_id: str
    entries: np.ndarray
    sqrt_weights: np.ndarray | None = Field(
        default=None,
        description="Square roots of quadrature weights (Nystrom basis only)",
    )
    reflection: np.ndarray | None = Field(
        default=None,
        description="Index permutation realizing q -> -q when the operator is parity symmetric",
    )

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="before")
    @classmethod
    def _enforce_hermitian(cls, data: dict) -> dict:
        entries = np.array(data["entries"], dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("operator matrix must be square")
        defect: float = float(np.max(np.abs(entries - entries.conj().T))) if entries.size else 0.0
        if defect > HERMITICITY_TOLERANCE:
            logger.warning("Non-Hermitian candidate rejected", defect=defect)
            raise NumericalError(
                ErrorCode.NOT_HERMITIAN,
                f"matrix is not Hermitian (max defect {defect:.3e})",
                {"defect": f"{defect:.3e}"},
            )
        entries = 0.5 * (entries + entries.conj().T)
        entries.setflags(write=False)
        return {**data, "entries": entries}

    @property
    def dimension(self) -> int:
        return int(self.entries.shape[0])

    @property
    def hermiticity_defect(self) -> float:
        """max |A_mn - conj(A_nm)| of the stored entries."""
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


class EigenPair(BaseModel):
    """Eigenvalue (time units) with its eigenfunction and tags."""

    eigenvalue: float
    eigenfunction: StateVector
    quantum_number: int = Field(ge=1)
    branch: Branch
    parity: Parity = Parity.NONE
    nodal: NodalTag | None = Field(default=None, description="None when not classified")
    family_index: int | None = Field(
        default=None,
        description="Index s or u inside the even/odd family (gamma in {0, pi/2})",
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_branch(self) -> "EigenPair":
        if self.branch is Branch.PLUS and not self.eigenvalue > 0:
            raise ValueError("plus branch needs a positive eigenvalue")
        if self.branch is Branch.MINUS and not self.eigenvalue < 0:
            raise ValueError("minus branch needs a negative eigenvalue")
        return self

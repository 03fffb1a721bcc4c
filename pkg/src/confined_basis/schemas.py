"""Momentum index sets of the twisted-boundary momentum family."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class MomentumIndexSet(BaseModel):
    """
    Plane-wave labels n kept in a truncated basis.

    The window is {n : |gamma + n pi| <= (N + 1/2) pi}; for |gamma| < pi/2 this is
    n in [-N, N], and it stays closed under reflection at |gamma| = pi/2.
    """

    cutoff: int = Field(ge=1, description="Truncation N")
    gamma: float
    indices: np.ndarray = Field(description="Ascending integer labels")
    null_mode_projected: bool = Field(
        description=(
            "True iff gamma = 0. Label 0 stays in indices; it is the null mode of p_0 and only "
            "the inverse momentum projects it out"
        )
    )

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _check(self) -> "MomentumIndexSet":
        if self.null_mode_projected != (self.gamma == 0.0):
            raise ValueError("null_mode_projected must be set exactly when gamma = 0")
        if self.indices.ndim != 1 or np.any(np.diff(self.indices) != 1):
            raise ValueError("indices must be consecutive ascending integers")
        self.indices.setflags(write=False)
        return self

    @classmethod
    def build(cls, cutoff: int, gamma: float) -> "MomentumIndexSet":
        """Window of labels for truncation ``cutoff`` at phase ``gamma``."""
        slack: float = 1e-12
        bound: float = cutoff + 0.5
        n_min: int = math.ceil(-bound - gamma / math.pi - slack)
        n_max: int = math.floor(bound - gamma / math.pi + slack)
        return cls(
            cutoff=cutoff,
            gamma=gamma,
            indices=np.arange(n_min, n_max + 1),
            null_mode_projected=gamma == 0.0,
        )

    @property
    def size(self) -> int:
        return int(self.indices.size)

    @property
    def basis_id(self) -> str:
        """Identifier matched against coefficient states."""
        return f"momentum:{int(self.indices[0])}:{int(self.indices[-1])}:{self.gamma!r}"

    def position(self, n: int) -> int:
        """Array position of label n."""
        offset: int = int(n) - int(self.indices[0])
        if not 0 <= offset < self.size:
            raise IndexError(f"label {n} outside the index window")
        return offset

    def contains(self, n: int) -> bool:
        return int(self.indices[0]) <= int(n) <= int(self.indices[-1])

    def reflection(self) -> np.ndarray | None:
        """
        Permutation implementing q -> -q on coefficients.

        Only phases 0 and +-pi/2 map the family onto itself; None otherwise.
        """
        shift: float = 2.0 * self.gamma / math.pi
        if abs(shift - round(shift)) > 1e-12:
            return None
        targets: np.ndarray = -self.indices - int(round(shift))
        return targets - int(self.indices[0])

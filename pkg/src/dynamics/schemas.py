"""Time series and reports produced by unitary evolution."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Observables(BaseModel):
    """Moments of one state."""

    mean_q: float
    var_q: float = Field(gt=0)
    mean_p: float
    density_at_origin: float = Field(ge=0)

    model_config = ConfigDict(frozen=True)


class EvolutionTrace(BaseModel):
    """Observables sampled on a uniform time grid."""

    times: np.ndarray
    mean_q: np.ndarray
    var_q: np.ndarray
    mean_p: np.ndarray
    density_at_origin: np.ndarray
    norms: np.ndarray = Field(description="Coefficient norm at each time")
    nodes: np.ndarray | None = Field(default=None, description="Grid nodes of the snapshots")
    snapshots: np.ndarray | None = Field(default=None, description="Density over (time, node)")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _check(self) -> "EvolutionTrace":
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be increasing")
        if np.any(self.var_q <= 0):
            raise ValueError("position variance must stay positive")
        return self

    @property
    def norm_drift(self) -> float:
        """max |norm(t) - norm(t_0)|."""
        return float(np.max(np.abs(self.norms - self.norms[0])))


class PowerLawFit(BaseModel):
    """values ~ prefactor * n^(-exponent) fitted in log space."""

    exponent: float
    prefactor: float
    residual: float = Field(ge=0, description="RMS residual in log space")
    points: int

    model_config = ConfigDict(frozen=True)


class ArrivalReport(BaseModel):
    """Pass/fail of the ideal arrival criteria at the origin."""

    tau: float | None = Field(default=None, description="Collapse time, None without an interior minimum")
    unique_minimum: bool
    centroid_at_tau: float | None = None
    centroid_at_origin: bool
    trajectory_deviation: float | None = None
    classical_centroid: bool
    mass_scaling_ratio: float | None = None
    geometric: bool

    model_config = ConfigDict(frozen=True)

    @property
    def passed(self) -> bool:
        return self.unique_minimum and self.centroid_at_origin and self.classical_centroid and self.geometric

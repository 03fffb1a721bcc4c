"""Pydantic schemas for the HTTP API."""

from pydantic import BaseModel, Field

from src.core.schemas import Branch, NodalTag, Parity


class ErrorResponse(BaseModel):
    """Schema for error response."""

    error_code: str = Field(description="Machine-readable error code")
    message: str = Field(description="Human-readable error message")
    details: dict[str, str] | None = Field(
        default=None,
        description="Additional error details",
    )


class SpectrumRow(BaseModel):
    """One eigenvalue pair of the analytic spectrum."""

    n: int
    r: float
    tau_plus: float
    tau_minus: float
    parity: Parity


class EigenfunctionSample(BaseModel):
    q: float
    re: float
    im: float


class EigenfunctionResponse(BaseModel):
    """Normalized eigenfunction with its classification."""

    n: int
    branch: Branch
    tau: float
    parity: Parity
    nodal: NodalTag
    samples: list[EigenfunctionSample]


class VerifyRequest(BaseModel):
    """Schema for a verification run."""

    suite: str = Field(default="all", description="all, spectral, dynamics or commutator")
    gamma: str | float | None = Field(default=None, description="Boundary phase, default 0.01")

"""Analytic spectrum records."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from src.core.schemas import Parity


class EigenfunctionVariant(str, Enum):
    """Closed form used for eigenfunction evaluation."""

    DERIVED = "derived"
    PRINTED = "printed"


class SpectrumEntry(BaseModel):
    """Root r_n with its eigenvalue pair."""

    n: int = Field(ge=1, description="Rank in the ascending (merged) root list")
    r: float = Field(gt=0)
    tau_plus: float = Field(gt=0)
    tau_minus: float = Field(lt=0)
    parity: Parity = Parity.NONE
    family_index: int | None = Field(default=None, description="Rank inside the even or odd family")

    model_config = ConfigDict(frozen=True)


class InvarianceCheck(BaseModel):
    """Comparison of one eigenpair under two (mu, hbar) choices."""

    max_sample_difference: float = Field(ge=0)
    tau_ratio: float
    expected_ratio: float

    model_config = ConfigDict(frozen=True)

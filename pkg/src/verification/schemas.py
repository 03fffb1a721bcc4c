"""Verification report records."""

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SuiteStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    REPORT_ONLY = "report_only"


class Provenance(str, Enum):
    """Where the expected value of a check comes from."""

    PUBLISHED = "published"
    DERIVED = "derived"
    TRIVIAL = "trivial"


class SuiteResult(BaseModel):
    """One checked metric."""

    name: str
    suite: str
    status: SuiteStatus
    metric: float | None = Field(default=None, description="None only when the check raised")
    tolerance: float | None = None
    provenance: Provenance
    note: str | None = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check(self) -> "SuiteResult":
        if self.status is not SuiteStatus.REPORT_ONLY and self.tolerance is None:
            raise ValueError("pass/fail entries need a tolerance")
        if self.metric is None and self.note is None:
            raise ValueError("entries without a metric must explain why")
        return self


class VerificationReport(BaseModel):
    """Collated results of the verification suites."""

    results: list[SuiteResult]
    config: dict[str, Any]
    timestamp: str

    model_config = ConfigDict(frozen=True)

    @property
    def passed(self) -> bool:
        """True iff no pass/fail entry failed; report-only entries never count."""
        return all(result.status is not SuiteStatus.FAIL for result in self.results)

    def failures(self) -> list[SuiteResult]:
        return [result for result in self.results if result.status is SuiteStatus.FAIL]

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.model_validate_json(text)


class CrossValidation(BaseModel):
    """Plus-branch eigenvalues of the three routes and their pairwise discrepancies."""

    count: int
    analytic: list[float]
    spectral: list[float]
    nystrom: list[float]
    discrepancies: dict[str, float] = Field(description="Max relative difference per route pair")

    model_config = ConfigDict(frozen=True)

    @property
    def max_discrepancy(self) -> float:
        return max(self.discrepancies.values())


class ConvergenceRow(BaseModel):
    cutoff: int
    taus: list[float]
    errors: list[float]

    model_config = ConfigDict(frozen=True)


class ConvergenceTable(BaseModel):
    """Spectral-matrix eigenvalue error against the analytic values, per cutoff."""

    analytic: list[float]
    rows: list[ConvergenceRow]
    monotone_violation: float = Field(ge=0, description="Largest error increase between successive cutoffs")
    extrapolated: float | None = Field(default=None, description="Aitken extrapolation of tau_1")

    model_config = ConfigDict(frozen=True)

    @property
    def monotone(self) -> bool:
        return self.monotone_violation == 0.0

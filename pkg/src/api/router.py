"""Router for spectrum, eigenfunction and verification endpoints."""

from fastapi import APIRouter, Query

from src.analytic_spectrum.equations import Family
from src.analytic_spectrum.service import analytic_eigenpair, family_spectrum
from src.api.error_handler import handle_error
from src.api.schemas import (
    EigenfunctionResponse,
    EigenfunctionSample,
    ErrorResponse,
    SpectrumRow,
    VerifyRequest,
)
from src.core.config import make_config
from src.core.grid import build_grid
from src.core.schemas import Branch
from src.logger import get_logger
from src.verification.schemas import VerificationReport
from src.verification.service import run_all

logger = get_logger(__name__)
router = APIRouter(tags=["ctoa"])

MAX_COUNT: int = 200

_ERRORS = {
    400: {"model": ErrorResponse, "description": "Invalid parameters"},
    422: {"model": ErrorResponse, "description": "Numerical failure"},
}


@router.get(
    "/spectrum",
    response_model=list[SpectrumRow],
    responses=_ERRORS,
    summary="Analytic spectrum",
    description="First count eigenvalue pairs for the boundary phase gamma, optionally from one root family.",
)
def get_spectrum(
    gamma: str = Query(default="0.01", description="Number, pi/2, -pi/2 or 0"),
    count: int = Query(default=10, ge=1, le=MAX_COUNT),
    case: Family = Query(default=Family.MERGED, description="merged, or one sub-equation at pi/2 and 0"),
) -> list[SpectrumRow]:
    try:
        config = make_config({"gamma": gamma})
        return [
            SpectrumRow(
                n=entry.n,
                r=entry.r,
                tau_plus=entry.tau_plus,
                tau_minus=entry.tau_minus,
                parity=entry.parity,
            )
            for entry in family_spectrum(config, case, count)
        ]
    except Exception as e:
        raise handle_error(e, "get_spectrum")


@router.get(
    "/eigenfunction",
    response_model=EigenfunctionResponse,
    responses=_ERRORS,
    summary="Eigenfunction samples",
    description="Normalized eigenfunction n on a Gauss-Legendre grid with parity and nodal tags.",
)
def get_eigenfunction(
    gamma: str = Query(default="0.01"),
    n: int = Query(ge=1),
    branch: Branch = Query(default=Branch.PLUS),
    grid: int = Query(default=256, le=4096, description="Quadrature nodes"),
) -> EigenfunctionResponse:
    try:
        config = make_config({"gamma": gamma, "grid_points": grid})
        nodes = build_grid(config.grid_points, config.length_l)
        pair = analytic_eigenpair(None, n, branch, config, nodes)
        amplitudes = pair.eigenfunction.amplitudes
        return EigenfunctionResponse(
            n=n,
            branch=branch,
            tau=pair.eigenvalue,
            parity=pair.parity,
            nodal=pair.nodal,
            samples=[
                EigenfunctionSample(q=q, re=re, im=im)
                for q, re, im in zip(nodes.nodes.tolist(), amplitudes.real.tolist(), amplitudes.imag.tolist())
            ],
        )
    except Exception as e:
        raise handle_error(e, "get_eigenfunction")


@router.post(
    "/verify",
    response_model=VerificationReport,
    responses={**_ERRORS, 404: {"model": ErrorResponse, "description": "Unknown suite"}},
    summary="Run verification",
    description="Run one suite (or all) and return the report.",
)
def post_verify(request: VerifyRequest) -> VerificationReport:
    try:
        config = make_config({"gamma": request.gamma} if request.gamma is not None else {})
        suites = None if request.suite == "all" else (request.suite,)
        logger.info("Verification requested", suite=request.suite)
        return run_all(config, suites)
    except Exception as e:
        raise handle_error(e, "post_verify")

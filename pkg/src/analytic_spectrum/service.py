"""Closed-form spectrum, eigenfunctions and their classification."""

import math
from functools import lru_cache

import numpy as np
from scipy import interpolate, optimize

from src.analytic_spectrum.equations import (
    Family,
    SpectralCase,
    characteristic_value,
    equation_tag,
)
from src.analytic_spectrum.schemas import EigenfunctionVariant, InvarianceCheck, SpectrumEntry
from src.core.config import SystemConfig
from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError, NumericalError
from src.core.grid import PositionGrid
from src.core.schemas import Branch, EigenPair, NodalTag, Parity, StateVector
from src.ctoa_operator.kernels import KernelKind
from src.ctoa_operator.service import apply_kernel, parity_symmetric
from src.logger import get_logger
from src.special_functions.bessel import MAX_ARGUMENT, BesselOrder, bessel_j, bessel_pair
from src.special_functions.roots import RootList, find_roots

logger = get_logger(__name__)

PARITY_TOLERANCE: float = 1e-6
NODE_THRESHOLD: float = 1e-8
GENERIC_NODE_THRESHOLD: float = 1e-5


def _resolve_case(case: SpectralCase | None, config: SystemConfig) -> SpectralCase:
    expected: SpectralCase = SpectralCase.for_gamma(config.gamma)
    if case is not None and case is not expected:
        raise DomainError(
            ErrorCode.DOMAIN_ERROR,
            f"case '{case.value}' does not match gamma = {config.gamma!r} (expected '{expected.value}')",
            {"case": case.value},
        )
    return expected


@lru_cache(maxsize=64)
def _roots(case: SpectralCase, gamma: float, family: Family, count: int, tolerance: float) -> RootList:
    return find_roots(
        lambda x: characteristic_value(x, case, gamma, family),
        x_max=min(math.pi * (count + 4), MAX_ARGUMENT),
        count=count,
        tolerance=tolerance,
        equation=equation_tag(case, family),
        gamma=gamma,
    )


def spectrum(case: SpectralCase | None, config: SystemConfig, count: int) -> list[SpectrumEntry]:
    """
    First ``count`` roots with tau^+- = +-(mu l^2 / 4 hbar) / r.

    For pi_half and periodic the even and odd root lists are merged in ascending
    order; n is the rank in the merged list.

    Args:
        case: Spectral case, or None to dispatch on gamma
        config: System configuration
        count: Number of entries K >= 1

    Returns:
        SpectrumEntry list ordered by n

    Raises:
        DomainError: If count < 1 or the case does not match gamma
        NumericalError: ROOTS_NOT_FOUND from the root finder
    """
    if count < 1:
        raise DomainError(ErrorCode.DOMAIN_ERROR, "spectrum needs count >= 1", {"count": str(count)})
    case = _resolve_case(case, config)
    tolerance: float = config.root_tolerance

    labelled: list[tuple[float, Parity, int | None]]
    if case is SpectralCase.GENERIC:
        roots = _roots(case, config.gamma, Family.MERGED, count, tolerance).roots
        labelled = [(float(r), Parity.NONE, None) for r in roots]
    else:
        even = _roots(case, 0.0, Family.EVEN, count, tolerance).roots
        odd = _roots(case, 0.0, Family.ODD, count, tolerance).roots
        labelled = sorted(
            [(float(r), Parity.EVEN, i) for i, r in enumerate(even, start=1)]
            + [(float(r), Parity.ODD, i) for i, r in enumerate(odd, start=1)]
        )[:count]

    entries: list[SpectrumEntry] = [
        SpectrumEntry(
            n=n,
            r=r,
            tau_plus=config.time_scale / r,
            tau_minus=-config.time_scale / r,
            parity=parity,
            family_index=family_index,
        )
        for n, (r, parity, family_index) in enumerate(labelled, start=1)
    ]
    logger.info("Analytic spectrum computed", case=case.value, gamma=config.gamma, count=count)
    return entries


def spectrum_entry(case: SpectralCase | None, n: int, config: SystemConfig) -> SpectrumEntry:
    """Entry for quantum number n."""
    if n < 1:
        raise DomainError(ErrorCode.DOMAIN_ERROR, "quantum numbers start at 1", {"n": str(n)})
    return spectrum(case, config, n)[n - 1]


def family_spectrum(config: SystemConfig, family: Family, count: int) -> list[SpectrumEntry]:
    """
    First ``count`` roots of one sub-equation, numbered inside the family.

    MERGED is the ordinary spectrum. EVEN and ODD exist only for pi_half and periodic.

    Raises:
        DomainError: For count < 1 or a split family at a generic gamma
    """
    if family is Family.MERGED:
        return spectrum(None, config, count)
    if count < 1:
        raise DomainError(ErrorCode.DOMAIN_ERROR, "spectrum needs count >= 1", {"count": str(count)})
    case: SpectralCase = SpectralCase.for_gamma(config.gamma)
    if case is SpectralCase.GENERIC:
        raise DomainError(
            ErrorCode.DOMAIN_ERROR,
            f"family '{family.value}' needs gamma in {{0, +-pi/2}}, got {config.gamma!r}",
            {"family": family.value},
        )
    parity: Parity = Parity.EVEN if family is Family.EVEN else Parity.ODD
    roots = _roots(case, 0.0, family, count, config.root_tolerance).roots
    return [
        SpectrumEntry(
            n=i,
            r=float(r),
            tau_plus=config.time_scale / float(r),
            tau_minus=-config.time_scale / float(r),
            parity=parity,
            family_index=i,
        )
        for i, r in enumerate(roots, start=1)
    ]


def _j(order: BesselOrder, r: float) -> float:
    return float(bessel_j(order, r))


def _odd_part(u: np.ndarray, x: np.ndarray, r: float, s: int) -> np.ndarray:
    return s * math.sqrt(r) * u * bessel_pair(0.25, 0.75, x, -s)


def eigenfunction(
    case: SpectralCase | None,
    n: int,
    branch: Branch,
    q: np.ndarray | float,
    config: SystemConfig,
    variant: EigenfunctionVariant = EigenfunctionVariant.DERIVED,
) -> np.ndarray:
    """
    Unnormalized eigenfunction at positions q.

    All Bessel factors take x = r_n q^2 / l^2. The plus branch carries e^{-ix}
    and J^-; the minus branch is its conjugate counterpart.

    Args:
        case: Spectral case, or None to dispatch on gamma
        n: Quantum number
        branch: Eigenvalue sign
        q: Positions in [-l, l]
        config: System configuration
        variant: DERIVED solves the integral equation exactly; PRINTED keeps the
            literature coefficients (2 sqrt(r) odd part, 4 (4r)^(-1/4) constant)

    Returns:
        Complex samples, same shape as q
    """
    case = _resolve_case(case, config)
    entry: SpectrumEntry = spectrum_entry(case, n, config)
    r: float = entry.r
    s: int = branch.sign
    u = np.asarray(q, dtype=float) / config.length_l
    if np.any(np.abs(u) > 1.0 + 1e-12):
        raise DomainError(ErrorCode.DOMAIN_ERROR, "eigenfunctions live on [-l, l]")
    x = r * u**2
    phase = np.exp(-1j * s * x)
    even_part = bessel_pair(0.75, 0.25, x, -s)

    if case is SpectralCase.GENERIC:
        cot: float = math.cos(config.gamma) / math.sin(config.gamma)
        alpha: float = _j(BesselOrder.MINUS_ONE_QUARTER, r) - cot * _j(BesselOrder.THREE_QUARTERS, r)
        beta: float = _j(BesselOrder.MINUS_THREE_QUARTERS, r) - cot * _j(BesselOrder.ONE_QUARTER, r)
        odd_weight: float = 2.0 if variant is EigenfunctionVariant.PRINTED else 1.0
        return phase * (alpha * even_part + odd_weight * beta * _odd_part(u, x, r, s))

    if entry.parity is Parity.ODD:
        return phase * _odd_part(u, x, r, s)
    if case is SpectralCase.PI_HALF:
        return phase * even_part

    constant: complex = np.exp(-1j * s * r) * _j(BesselOrder.ONE_QUARTER, r) * r**-0.25
    if variant is EigenfunctionVariant.PRINTED:
        constant *= 2.0 * math.sqrt(2.0)
    return phase * even_part + constant


def normalize_eigenfunction(samples: np.ndarray, grid: PositionGrid) -> StateVector:
    """
    Unit quadrature norm; fixes A_n (or B_s) implicitly.

    Raises:
        NumericalError: ZERO_NORM for vanishing samples
    """
    return StateVector.sampled(samples, grid).normalize()


def normalization_constant(
    case: SpectralCase | None,
    n: int,
    branch: Branch,
    config: SystemConfig,
    grid: PositionGrid,
    variant: EigenfunctionVariant = EigenfunctionVariant.DERIVED,
) -> float:
    """A_n = 1 / ||phi_n|| by quadrature."""
    samples: np.ndarray = eigenfunction(case, n, branch, grid.nodes, config, variant)
    return 1.0 / StateVector.sampled(samples, grid).norm


def _parity(samples: np.ndarray, grid: PositionGrid, gamma: float) -> Parity:
    if not parity_symmetric(gamma):
        return Parity.NONE
    mirrored: np.ndarray = grid.reflect(samples)
    scale: float = float(np.linalg.norm(samples))
    if np.linalg.norm(samples - mirrored) <= PARITY_TOLERANCE * scale:
        return Parity.EVEN
    if np.linalg.norm(samples + mirrored) <= PARITY_TOLERANCE * scale:
        return Parity.ODD
    raise NumericalError(
        ErrorCode.AMBIGUOUS_CLASSIFICATION,
        "samples are neither even nor odd under reflection",
        {"gamma": repr(gamma)},
    )


def _interior_minima(samples: np.ndarray, grid: PositionGrid) -> list[tuple[float, float]]:
    """Interior local minima of |phi|^2 as (position, depth relative to the peak), deepest first."""
    density: np.ndarray = np.abs(samples) ** 2
    peak: float = float(np.max(density))
    real = interpolate.CubicSpline(grid.nodes, samples.real)
    imag = interpolate.CubicSpline(grid.nodes, samples.imag)

    def spline_density(q: float) -> float:
        return float(real(q) ** 2 + imag(q) ** 2)

    minima: list[tuple[float, float]] = []
    for i in range(1, grid.size - 1):
        if density[i] <= density[i - 1] and density[i] <= density[i + 1]:
            found = optimize.minimize_scalar(
                spline_density,
                bounds=(grid.nodes[i - 1], grid.nodes[i + 1]),
                method="bounded",
                options={"xatol": 1e-12},
            )
            if not any(abs(found.x - q) < 1e-9 for q, _ in minima):
                minima.append((float(found.x), float(found.fun) / peak))
    return sorted(minima, key=lambda minimum: minimum[1])


def classify(samples: np.ndarray, grid: PositionGrid, gamma: float) -> tuple[Parity, NodalTag]:
    """
    Parity (gamma in {0, +-pi/2} only) and nodal tag of eigenfunction samples.

    A node is an interior local minimum of |phi|^2, refined on a cubic spline,
    below NODE_THRESHOLD times the peak density. Away from the parity phases the
    even and odd parts of the closed form are complex and generically never
    cancel exactly, so an odd-n eigenfunction carries a near-zero whose depth
    grows from zero with the distance to the nearest parity phase. There the
    deepest minimum counts as a node when it lies below GENERIC_NODE_THRESHOLD.

    Args:
        samples: Eigenfunction samples on a symmetric grid
        grid: The grid
        gamma: Boundary phase

    Returns:
        (parity, nodal tag)

    Raises:
        NumericalError: AMBIGUOUS_CLASSIFICATION for more than one zero or no definite parity
    """
    samples = np.asarray(samples, dtype=complex)
    parity: Parity = _parity(samples, grid, gamma)
    minima: list[tuple[float, float]] = _interior_minima(samples, grid)
    zeros: list[float] = [q for q, depth in minima if depth <= NODE_THRESHOLD]
    if len(zeros) > 1:
        logger.warning("Several near-zeros found", count=len(zeros))
        raise NumericalError(
            ErrorCode.AMBIGUOUS_CLASSIFICATION,
            f"density nearly vanishes at {len(zeros)} interior points",
            {"points": ", ".join(f"{z:.6g}" for z in zeros)},
        )
    if zeros:
        return parity, NodalTag.NODAL
    if not parity_symmetric(gamma) and minima and minima[0][1] <= GENERIC_NODE_THRESHOLD:
        logger.debug("Near-zero taken as node", gamma=gamma, position=minima[0][0], depth=minima[0][1])
        return parity, NodalTag.NODAL
    return parity, NodalTag.NON_NODAL


def analytic_eigenpair(
    case: SpectralCase | None,
    n: int,
    branch: Branch,
    config: SystemConfig,
    grid: PositionGrid,
    variant: EigenfunctionVariant = EigenfunctionVariant.DERIVED,
) -> EigenPair:
    """Normalized, classified analytic eigenpair sampled on ``grid``."""
    entry: SpectrumEntry = spectrum_entry(case, n, config)
    state: StateVector = normalize_eigenfunction(
        eigenfunction(case, n, branch, grid.nodes, config, variant), grid
    )
    parity, nodal = classify(state.amplitudes, grid, config.gamma)
    return EigenPair(
        eigenvalue=entry.tau_plus if branch is Branch.PLUS else entry.tau_minus,
        eigenfunction=state,
        quantum_number=n,
        branch=branch,
        parity=parity,
        nodal=nodal,
        family_index=entry.family_index,
    )


def kernel_residual(
    case: SpectralCase | None,
    n: int,
    branch: Branch,
    config: SystemConfig,
    grid: PositionGrid,
    variant: EigenfunctionVariant = EigenfunctionVariant.DERIVED,
) -> float:
    """
    Relative L2 residual ||T phi - tau phi|| / ||tau phi|| of an analytic eigenpair.

    T phi is computed with apply_kernel on the normalized samples.
    """
    entry: SpectrumEntry = spectrum_entry(case, n, config)
    tau: float = entry.tau_plus if branch is Branch.PLUS else entry.tau_minus
    state: StateVector = normalize_eigenfunction(
        eigenfunction(case, n, branch, grid.nodes, config, variant), grid
    )
    applied: np.ndarray = apply_kernel(KernelKind.for_gamma(config.gamma), state.amplitudes, grid, config)
    residual: StateVector = state.with_amplitudes(applied - tau * state.amplitudes)
    return residual.norm / abs(tau)


def geometric_invariance(
    case: SpectralCase | None,
    n: int,
    config: SystemConfig,
    grid: PositionGrid,
    mass_factor: float = 2.0,
    hbar_factor: float = 3.0,
) -> InvarianceCheck:
    """
    Compare eigenpair n under (mu, hbar) and (mass_factor mu, hbar_factor hbar).

    Eigenfunctions depend on q / l only, eigenvalues scale with mu l^2 / hbar.
    """
    scaled: SystemConfig = config.with_updates(
        mass_mu=config.mass_mu * mass_factor,
        hbar=config.hbar * hbar_factor,
    )
    base = analytic_eigenpair(case, n, Branch.PLUS, config, grid)
    other = analytic_eigenpair(case, n, Branch.PLUS, scaled, grid)
    difference: float = float(np.max(np.abs(base.eigenfunction.amplitudes - other.eigenfunction.amplitudes)))
    return InvarianceCheck(
        max_sample_difference=difference,
        tau_ratio=other.eigenvalue / base.eigenvalue,
        expected_ratio=mass_factor / hbar_factor,
    )

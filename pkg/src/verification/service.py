"""Cross-route validation, commutator residual and the consolidated report."""

import math
from collections.abc import Callable, Iterable
from datetime import datetime, timezone

UTC = timezone.utc

import numpy as np

from src.analytic_spectrum.equations import SpectralCase, characteristic_value
from src.analytic_spectrum.schemas import EigenfunctionVariant
from src.analytic_spectrum.service import (
    analytic_eigenpair,
    eigenfunction,
    kernel_residual,
    spectrum,
)
from src.config import settings
from src.confined_basis.schemas import MomentumIndexSet
from src.confined_basis.service import (
    PlaneWaveBasis,
    build_index_set,
    energies,
    inverse_momenta,
    momenta,
)
from src.core.config import SystemConfig
from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError, LabError, LookupFailure
from src.core.grid import PositionGrid, build_grid
from src.core.schemas import Branch, NodalTag, Parity, StateVector
from src.ctoa_operator.kernels import KernelKind
from src.ctoa_operator.service import (
    diagonalize,
    eigenvalues_by_branch,
    hilbert_schmidt_norm,
    matrix_nystrom,
    matrix_spectral,
    nystrom_entries,
    spectral_entries,
)
from src.dynamics.service import (
    density_peak_time,
    evolve,
    ideal_arrival_check,
    observables,
    time_reversal_defect,
    trace_evolution,
    trajectory_deviation,
    variance_minimum,
    variance_scaling_fit,
    zero_crossing_time,
)
from src.logger import get_logger
from src.special_functions.bessel import MAX_ARGUMENT, BesselOrder, bessel_j
from src.special_functions.roots import DEFAULT_SCAN_STEP, find_roots
from src.verification.schemas import (
    ConvergenceRow,
    ConvergenceTable,
    CrossValidation,
    Provenance,
    SuiteResult,
    SuiteStatus,
    VerificationReport,
)

logger = get_logger(__name__)

SUITES: tuple[str, ...] = ("commutator", "dynamics", "spectral")
MAX_CROSS_VALIDATION_COUNT: int = 10
OVERLAP_NODES_PER_MODE: int = 2
PARITY_TOLERANCE: float = 1e-3
GENERIC_TOLERANCE: float = 5e-3
REFERENCE_GAMMA: float = 0.01
COMMUTATOR_FLOOR: float = 1e-9
TRACE_STEPS: int = 256
COMMUTATOR_CUTOFFS: tuple[int, ...] = (64, 128, 256, 512)

StateFactory = Callable[[MomentumIndexSet, SystemConfig], StateVector]


def canonical_test_state(
    index_set: MomentumIndexSet,
    config: SystemConfig,
    width: float = 4.0,
    corrected: bool = True,
) -> StateVector:
    """
    Smooth coefficient state centred on label 0.

    The Gaussian profile exp(-(n / width)^2 / 2) (zero on the null mode) is
    corrected inside its own support so that the boundary sums
    sum_n (-1)^n p_n^k c_n vanish for k in {-1, 0, 1}; truncated (HT - TH) then
    acts on it as i hbar exactly.

    Args:
        index_set: Label window
        config: System configuration
        width: Profile width in modes
        corrected: False returns the plain Gaussian profile

    Returns:
        Normalized coefficient state
    """
    n: np.ndarray = index_set.indices
    profile: np.ndarray = np.exp(-0.5 * (n / width) ** 2)
    if index_set.null_mode_projected:
        profile[n == 0] = 0.0

    if corrected:
        sign: np.ndarray = np.where(n % 2 == 0, 1.0, -1.0)
        powers: np.ndarray = np.vstack(
            [inverse_momenta(index_set, config), np.ones(n.size), momenta(index_set, config)]
        )
        gram: np.ndarray = (powers * profile) @ powers.T
        functionals: np.ndarray = powers @ (sign * profile)
        alpha: np.ndarray = np.linalg.solve(gram, functionals)
        profile = profile - profile * sign * (alpha @ powers)

    return StateVector.coefficients(profile, index_set.basis_id).normalize()


def gaussian_test_state(index_set: MomentumIndexSet, config: SystemConfig, width: float = 4.0) -> StateVector:
    """Plain Gaussian coefficient profile; the default commutator test family."""
    return canonical_test_state(index_set, config, width, corrected=False)


def single_mode_state(index_set: MomentumIndexSet, config: SystemConfig, label: int = 1) -> StateVector:
    """Unit coefficient on one plane wave."""
    coefficients: np.ndarray = np.zeros(index_set.size, dtype=complex)
    coefficients[index_set.position(label)] = 1.0
    return StateVector.coefficients(coefficients, index_set.basis_id)


def commutator_residual(
    config: SystemConfig,
    cutoff: int | None = None,
    state_factory: StateFactory = gaussian_test_state,
) -> float:
    """
    ||(HT - TH) psi - i hbar psi|| / ||psi|| with truncated H and T.

    Args:
        config: System configuration
        cutoff: Truncation N (defaults to config.basis_cutoff)
        state_factory: Builds the test state on the truncation's index set; the
            plain Gaussian by default, whose boundary sums do not vanish, so the
            residual grows with the cutoff

    Returns:
        Relative residual
    """
    index_set: MomentumIndexSet = build_index_set(config, cutoff)
    operator: np.ndarray = matrix_spectral(config, cutoff).entries
    energy: np.ndarray = energies(index_set, config)
    c: np.ndarray = np.asarray(state_factory(index_set, config).amplitudes)
    commutator: np.ndarray = energy * (operator @ c) - operator @ (energy * c)
    residual: float = float(np.linalg.norm(commutator - 1j * config.hbar * c) / np.linalg.norm(c))
    logger.debug("Commutator residual", gamma=config.gamma, cutoff=index_set.cutoff, residual=residual)
    return residual


def _relative_gap(reference: list[float], other: list[float], scale: list[float]) -> float:
    return max(abs(a - b) / abs(s) for a, b, s in zip(reference, other, scale))


def cross_validate(config: SystemConfig, count: int, grid: PositionGrid | None = None) -> CrossValidation:
    """
    Compare the first ``count`` plus-branch eigenvalues of the analytic roots,
    the spectral matrix and the Nystrom matrix.

    Discrepancies are relative to the analytic value and symmetric in the pair.

    Raises:
        DomainError: If count is outside [1, 10]
    """
    if not 1 <= count <= MAX_CROSS_VALIDATION_COUNT:
        raise DomainError(
            ErrorCode.DOMAIN_ERROR,
            f"cross validation takes 1..{MAX_CROSS_VALIDATION_COUNT} eigenvalues",
            {"count": str(count)},
        )
    grid = grid or build_grid(config.grid_points, config.length_l)
    analytic: list[float] = [entry.tau_plus for entry in spectrum(None, config, count)]
    spectral: list[float] = eigenvalues_by_branch(diagonalize(matrix_spectral(config)))[:count].tolist()
    nystrom: list[float] = eigenvalues_by_branch(diagonalize(matrix_nystrom(config, grid)))[:count].tolist()
    result = CrossValidation(
        count=count,
        analytic=analytic,
        spectral=spectral,
        nystrom=nystrom,
        discrepancies={
            "analytic~nystrom": _relative_gap(analytic, nystrom, analytic),
            "analytic~spectral": _relative_gap(analytic, spectral, analytic),
            "nystrom~spectral": _relative_gap(spectral, nystrom, analytic),
        },
    )
    logger.info("Routes cross-validated", gamma=config.gamma, count=count, worst=result.max_discrepancy)
    return result


def _aitken(values: list[float]) -> float:
    first, second, third = values[-3:]
    denominator: float = (third - second) - (second - first)
    if denominator == 0.0:
        return third
    return third - (third - second) ** 2 / denominator


def convergence_study(config: SystemConfig, cutoffs: Iterable[int], count: int = 4) -> ConvergenceTable:
    """
    Spectral-matrix eigenvalue errors against the analytic roots for increasing cutoffs.

    Raises:
        DomainError: If the cutoffs are not strictly increasing
    """
    cutoffs = list(cutoffs)
    if not cutoffs or any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise DomainError(ErrorCode.DOMAIN_ERROR, "cutoffs must be strictly increasing")

    analytic: list[float] = [entry.tau_plus for entry in spectrum(None, config, count)]
    rows: list[ConvergenceRow] = []
    for cutoff in cutoffs:
        taus: list[float] = eigenvalues_by_branch(diagonalize(matrix_spectral(config, cutoff)))[:count].tolist()
        taus += [math.nan] * (count - len(taus))
        errors: list[float] = [abs(t - a) if math.isfinite(t) else math.inf for t, a in zip(taus, analytic)]
        rows.append(ConvergenceRow(cutoff=cutoff, taus=taus, errors=errors))

    violation: float = 0.0
    for previous, current in zip(rows, rows[1:]):
        for before, after, reference in zip(previous.errors, current.errors, analytic):
            if after > before + 1e-14 * reference:
                violation = max(violation, after - before if math.isfinite(after) else math.inf)

    first_taus: list[float] = [row.taus[0] for row in rows]
    extrapolated: float | None = _aitken(first_taus) if len(rows) >= 3 else None
    logger.info("Convergence study finished", gamma=config.gamma, cutoffs=cutoffs, violation=violation)
    return ConvergenceTable(
        analytic=analytic,
        rows=rows,
        monotone_violation=violation,
        extrapolated=extrapolated,
    )


def eigenvector_overlaps(config: SystemConfig, count: int, grid: PositionGrid | None = None) -> list[float]:
    """
    |<analytic_n|matrix_n>| for the first ``count`` plus-branch eigenvectors of
    the spectral matrix.

    The analytic eigenfunction is projected onto the truncation by quadrature.
    The default grid carries OVERLAP_NODES_PER_MODE nodes per basis label so the
    highest plane wave is resolved.

    Raises:
        DomainError: If count is outside [1, 10]
    """
    if not 1 <= count <= MAX_CROSS_VALIDATION_COUNT:
        raise DomainError(
            ErrorCode.DOMAIN_ERROR,
            f"overlaps take 1..{MAX_CROSS_VALIDATION_COUNT} eigenvectors",
            {"count": str(count)},
        )
    grid = grid or build_grid(OVERLAP_NODES_PER_MODE * build_index_set(config).size, config.length_l)
    basis = PlaneWaveBasis(config, grid)
    pairs = [pair for pair in diagonalize(matrix_spectral(config)) if pair.branch is Branch.PLUS][:count]
    overlaps: list[float] = []
    for n, pair in enumerate(pairs, start=1):
        analytic: StateVector = basis.to_momentum(analytic_eigenpair(None, n, Branch.PLUS, config, grid).eigenfunction)
        overlaps.append(float(abs(np.vdot(analytic.amplitudes, pair.eigenfunction.amplitudes))))
    logger.info("Eigenvectors compared", gamma=config.gamma, count=count, worst=min(overlaps, default=math.nan))
    return overlaps


def route_refinement(
    config: SystemConfig,
    count: int = 6,
    resolutions: tuple[int, int] = (128, 512),
) -> dict[str, tuple[float, float]]:
    """
    Worst relative eigenvalue error of each matrix route at a coarse and a fine
    resolution (cutoff N for the spectral matrix, M nodes for Nystrom).

    Returns:
        {"spectral": (coarse, fine), "nystrom": (coarse, fine)}
    """
    analytic: np.ndarray = np.array([entry.tau_plus for entry in spectrum(None, config, count)])

    def worst(taus: np.ndarray) -> float:
        if taus.size < count:
            return math.inf
        return float(np.max(np.abs(taus[:count] - analytic) / analytic))

    errors: dict[str, tuple[float, float]] = {
        "spectral": tuple(
            worst(eigenvalues_by_branch(diagonalize(matrix_spectral(config, size)))) for size in resolutions
        ),
        "nystrom": tuple(
            worst(eigenvalues_by_branch(diagonalize(matrix_nystrom(config, build_grid(size, config.length_l)))))
            for size in resolutions
        ),
    }
    logger.info("Route refinement measured", gamma=config.gamma, resolutions=list(resolutions), errors=errors)
    return errors


class _Collector:
    """Accumulates suite results; lab errors become failed entries."""

    def __init__(self, suite: str):
        self.suite = suite
        self.results: list[SuiteResult] = []

    def setup_failed(self, name: str, error: LabError) -> None:
        """Record a check whose inputs could not be prepared."""

        def reraise() -> float:
            raise error

        self.record(name, reraise, Provenance.DERIVED, 0.0)

    def record(
        self,
        name: str,
        compute: Callable[[], float],
        provenance: Provenance,
        tolerance: float | None = None,
    ) -> float | None:
        status: SuiteStatus
        try:
            metric: float = float(compute())
        except (LabError, ValueError, np.linalg.LinAlgError) as e:
            code: str = e.error_code.value if isinstance(e, LabError) else ErrorCode.INTERNAL_ERROR.value
            message: str = e.message if isinstance(e, LabError) else str(e)
            logger.warning("Check raised", suite=self.suite, check=name, error_code=code)
            status = SuiteStatus.REPORT_ONLY if tolerance is None else SuiteStatus.FAIL
            self.results.append(
                SuiteResult(
                    name=name,
                    suite=self.suite,
                    status=status,
                    tolerance=tolerance,
                    provenance=provenance,
                    note=f"{code}: {message}",
                )
            )
            return None

        if not math.isfinite(metric):
            self.results.append(
                SuiteResult(
                    name=name,
                    suite=self.suite,
                    status=SuiteStatus.REPORT_ONLY if tolerance is None else SuiteStatus.FAIL,
                    tolerance=tolerance,
                    provenance=provenance,
                    note=f"non-finite metric {metric}",
                )
            )
            return None

        if tolerance is None:
            status = SuiteStatus.REPORT_ONLY
        else:
            status = SuiteStatus.PASS if metric <= tolerance else SuiteStatus.FAIL
        self.results.append(
            SuiteResult(
                name=name,
                suite=self.suite,
                status=status,
                metric=metric,
                tolerance=tolerance,
                provenance=provenance,
            )
        )
        return metric


def _parity_mismatches(config: SystemConfig, count: int) -> float:
    expected: list[Parity] = [entry.parity for entry in spectrum(None, config, count)]
    pairs = [pair for pair in diagonalize(matrix_spectral(config)) if pair.branch is Branch.PLUS][:count]
    return float(sum(pair.parity is not parity for pair, parity in zip(pairs, expected)))


def _nodal_mismatches(config: SystemConfig, grid: PositionGrid, largest: int) -> float:
    mismatches: int = 0
    for n in range(1, largest + 1):
        pair = analytic_eigenpair(None, n, Branch.PLUS, config, grid)
        expected: NodalTag = NodalTag.NODAL if n % 2 else NodalTag.NON_NODAL
        mismatches += pair.nodal is not expected
    return float(mismatches)


def _odd_family_gap(config: SystemConfig, grid: PositionGrid, count: int) -> float:
    periodic: SystemConfig = config.with_updates(gamma=0.0)
    pi_half: SystemConfig = config.with_updates(gamma=math.pi / 2)
    periodic_odd = [e.n for e in spectrum(None, periodic, 2 * count) if e.parity is Parity.ODD][:count]
    pi_half_odd = [e.n for e in spectrum(None, pi_half, 2 * count) if e.parity is Parity.ODD][:count]
    gap: float = 0.0
    for n_periodic, n_pi_half in zip(periodic_odd, pi_half_odd):
        a = eigenfunction(None, n_periodic, Branch.PLUS, grid.nodes, periodic)
        b = eigenfunction(None, n_pi_half, Branch.PLUS, grid.nodes, pi_half)
        gap = max(gap, float(np.max(np.abs(a - b))))
    return gap


def _geometric_scaling_gap(config: SystemConfig) -> float:
    base: np.ndarray = spectral_entries(config)
    scaled_config: SystemConfig = config.with_updates(mass_mu=2.0 * config.mass_mu, hbar=3.0 * config.hbar)
    scaled: np.ndarray = spectral_entries(scaled_config)
    return float(np.max(np.abs(scaled - (2.0 / 3.0) * base)) / np.max(np.abs(base)))


def _first_even(config: SystemConfig) -> int:
    return next(e.n for e in spectrum(None, config, 4) if e.parity is Parity.EVEN)


def _pairing_gap(config: SystemConfig) -> float:
    pairs = diagonalize(matrix_spectral(config))
    plus = eigenvalues_by_branch(pairs, Branch.PLUS)
    minus = eigenvalues_by_branch(pairs, Branch.MINUS)
    return float(np.max(np.abs(plus + minus)))


def _bessel_recurrence_defect() -> float:
    x: np.ndarray = np.linspace(0.05, MAX_ARGUMENT, 2001)
    left = bessel_j(BesselOrder.MINUS_THREE_QUARTERS, x) + bessel_j(BesselOrder.FIVE_QUARTERS, x)
    right = bessel_j(BesselOrder.ONE_QUARTER, x) / (2.0 * x)
    return float(np.max(np.abs(left - right) / np.maximum(1.0, np.abs(right))))


def _scan_step_shift(config: SystemConfig, count: int) -> float:
    def equation(x: np.ndarray) -> np.ndarray:
        return characteristic_value(x, SpectralCase.GENERIC, config.gamma)

    x_max: float = math.pi * (count + 4)
    coarse: np.ndarray = find_roots(equation, x_max, count).roots
    fine: np.ndarray = find_roots(equation, x_max, count, step=DEFAULT_SCAN_STEP / 2).roots
    return float(np.max(np.abs(fine - coarse)))


def _hermiticity_defect(config: SystemConfig, grid: PositionGrid) -> float:
    defects: list[float] = []
    for entries in (spectral_entries(config), nystrom_entries(config, grid)):
        defects.append(float(np.max(np.abs(entries - entries.conj().T))))
    return max(defects)


def _spectral_suite(config: SystemConfig, grid: PositionGrid) -> list[SuiteResult]:
    checks = _Collector("spectral")
    pi_half: SystemConfig = config.with_updates(gamma=math.pi / 2)
    reference: SystemConfig = config.with_updates(gamma=REFERENCE_GAMMA)

    phases: list[tuple[str, SystemConfig, float]] = [
        ("pi_half", pi_half, PARITY_TOLERANCE),
        ("periodic", config.with_updates(gamma=0.0), PARITY_TOLERANCE),
        ("generic", reference, GENERIC_TOLERANCE),
    ]
    for label, phase_config, tolerance in phases:
        checks.record(
            f"cross_validate.{label}",
            lambda c=phase_config: cross_validate(c, 6, grid).max_discrepancy,
            Provenance.DERIVED,
            tolerance,
        )
        checks.record(f"hermiticity.{label}", lambda c=phase_config: _hermiticity_defect(c, grid), Provenance.TRIVIAL, 1e-12)
        checks.record(f"pairing.{label}", lambda c=phase_config: _pairing_gap(c), Provenance.PUBLISHED, 1e-10)
        if label != "generic":
            checks.record(f"parity.{label}", lambda c=phase_config: _parity_mismatches(c, 6), Provenance.PUBLISHED, 0.0)

    checks.record("nodal_theorem.n_le_24", lambda: _nodal_mismatches(reference, grid, 24), Provenance.PUBLISHED, 0.0)
    checks.record("odd_family_coincidence", lambda: _odd_family_gap(config, grid, 3), Provenance.PUBLISHED, 1e-10)
    checks.record("geometric_scaling", lambda: _geometric_scaling_gap(config), Provenance.PUBLISHED, 1e-12)

    for label, phase_config in (("pi_half", pi_half), ("periodic", config.with_updates(gamma=0.0))):
        checks.record(
            f"eigenvector_overlap.{label}",
            lambda c=phase_config: 1.0 - min(eigenvector_overlaps(c, 6)),
            Provenance.DERIVED,
            1e-3,
        )
    checks.record(
        "eigenvector_overlap.generic",
        lambda: 1.0 - min(eigenvector_overlaps(reference, 6)),
        Provenance.DERIVED,
    )

    refinement: dict[str, tuple[float, float]] = {}

    def refined(route: str) -> float:
        if not refinement:
            refinement.update(route_refinement(pi_half))
        coarse_error, fine_error = refinement[route]
        return fine_error / coarse_error if coarse_error > 0.0 else 0.0

    for route in ("spectral", "nystrom"):
        checks.record(f"route_refinement.{route}", lambda r=route: refined(r), Provenance.DERIVED, 1.0)

    checks.record("bessel_recurrence", _bessel_recurrence_defect, Provenance.TRIVIAL, 1e-12)
    checks.record(
        "roots.scan_step_stability",
        lambda: _scan_step_shift(reference, 40),
        Provenance.DERIVED,
        1e-10,
    )

    periodic: SystemConfig = config.with_updates(gamma=0.0)
    for variant, tolerance in ((EigenfunctionVariant.DERIVED, 1e-3), (EigenfunctionVariant.PRINTED, None)):
        checks.record(
            f"kernel_residual.generic_n2.{variant.value}",
            lambda v=variant: kernel_residual(None, 2, Branch.PLUS, reference, grid, v),
            Provenance.DERIVED,
            tolerance,
        )
        checks.record(
            f"kernel_residual.periodic_even.{variant.value}",
            lambda v=variant: kernel_residual(None, _first_even(periodic), Branch.PLUS, periodic, grid, v),
            Provenance.DERIVED,
            tolerance,
        )

    coarse: PositionGrid = build_grid(max(grid.size // 2, 16), config.length_l)
    fine: float = hilbert_schmidt_norm(KernelKind.NONPERIODIC, pi_half, grid)
    checks.record(
        "hilbert_schmidt.refinement",
        lambda: abs(hilbert_schmidt_norm(KernelKind.NONPERIODIC, pi_half, coarse) - fine) / fine,
        Provenance.DERIVED,
        1e-6,
    )

    def frobenius_gap() -> float:
        estimate: float = hilbert_schmidt_norm(KernelKind.NONPERIODIC, pi_half, grid, diagonal="nystrom")
        eigenvalues = np.array([pair.eigenvalue for pair in diagonalize(matrix_nystrom(pi_half, grid))])
        return abs(float(np.sum(eigenvalues**2)) - estimate) / estimate

    checks.record("hilbert_schmidt.frobenius_identity", frobenius_gap, Provenance.TRIVIAL, 1e-4)

    top: int = pi_half.basis_cutoff
    cutoffs: list[int] = [max(top // 8, 1), max(top // 4, 2), max(top // 2, 3), top]
    table: ConvergenceTable | None = None

    def study() -> float:
        nonlocal table
        table = convergence_study(pi_half, cutoffs)
        return table.monotone_violation

    checks.record("convergence.monotone", study, Provenance.DERIVED, 0.0)
    if table is not None:
        checks.record("convergence.finest_error", lambda: max(table.rows[-1].errors), Provenance.DERIVED, 1e-3)
        checks.record(
            "convergence.extrapolated_tau1",
            lambda: abs(table.extrapolated - table.analytic[0]),
            Provenance.DERIVED,
            1e-4,
        )

        def cutoff_parity() -> float:
            base_error: float = table.rows[0].errors[0]
            shifted: float = eigenvalues_by_branch(diagonalize(matrix_spectral(pi_half, cutoffs[0] + 1)))[0]
            return abs(shifted - table.rows[0].taus[0]) / max(base_error, np.finfo(float).tiny)

        checks.record("convergence.cutoff_parity_ratio", cutoff_parity, Provenance.DERIVED)

    return checks.results


def _dynamics_suite(config: SystemConfig, grid: PositionGrid) -> list[SuiteResult]:
    checks = _Collector("dynamics")
    reference: SystemConfig = config.with_updates(gamma=REFERENCE_GAMMA)
    basis = PlaneWaveBasis(reference, grid)

    for n in (2, 6, 20):
        try:
            pair = analytic_eigenpair(None, n, Branch.PLUS, reference, grid)
            tau: float = pair.eigenvalue
            window: tuple[float, float] = (0.0, 2.0 * tau)
            trace = trace_evolution(pair.eigenfunction, window, TRACE_STEPS, basis)
        except LabError as e:
            checks.setup_failed(f"eigenpair.n{n}", e)
            continue
        checks.record(
            f"collapse_time.n{n}",
            lambda s=pair.eigenfunction, t=tau, w=window: abs(variance_minimum(s, basis, w)[0] - t) / t,
            Provenance.PUBLISHED,
            0.05,
        )
        checks.record(
            f"zero_crossing.n{n}",
            lambda tr=trace, t=tau: abs(zero_crossing_time(tr) - t) / t,
            Provenance.PUBLISHED,
            0.05,
        )
        if n == 20:
            checks.record("unitarity.n20", lambda tr=trace: tr.norm_drift, Provenance.TRIVIAL, 1e-10)
            checks.record(
                "density_peak.n20",
                lambda tr=trace, t=tau: abs(density_peak_time(tr) - t) / t,
                Provenance.PUBLISHED,
                0.05,
            )
            checks.record(
                "ideal_arrival.n20",
                lambda s=pair.eigenfunction, w=window: float(not ideal_arrival_check(s, basis, w).passed),
                Provenance.PUBLISHED,
                0.0,
            )
        if n == 2:
            checks.record(
                "trajectory_deviation.n2",
                lambda s=pair.eigenfunction, t=tau: trajectory_deviation(
                    trace_evolution(s, (0.0, t), TRACE_STEPS, basis), reference
                ),
                Provenance.DERIVED,
                0.05,
            )

    def nodal_collapse() -> float:
        pair = analytic_eigenpair(None, 21, Branch.PLUS, reference, grid)
        trace = trace_evolution(pair.eigenfunction, (0.0, 2.0 * pair.eigenvalue), TRACE_STEPS, basis)
        at_tau: float = observables(evolve(pair.eigenfunction, pair.eigenvalue, basis), basis).density_at_origin
        return at_tau / float(np.max(trace.density_at_origin))

    checks.record("nodal_collapse.n21", nodal_collapse, Provenance.PUBLISHED, 1e-4)

    pi_half: SystemConfig = config.with_updates(gamma=math.pi / 2)
    pi_half_basis = PlaneWaveBasis(pi_half, grid)
    try:
        plus = analytic_eigenpair(None, 1, Branch.PLUS, pi_half, grid)
        minus = analytic_eigenpair(None, 1, Branch.MINUS, pi_half, grid)
    except LabError as e:
        checks.setup_failed("eigenpair.pi_half_n1", e)
        return checks.results
    checks.record(
        "time_reversal.pi_half_n1",
        lambda: time_reversal_defect(
            plus.eigenfunction, minus.eigenfunction, np.linspace(0.0, 2.0 * plus.eigenvalue, 16), pi_half_basis
        ),
        Provenance.PUBLISHED,
        1e-8,
    )

    def parity_moments() -> float:
        moments = observables(plus.eigenfunction, pi_half_basis)
        return max(abs(moments.mean_q), abs(moments.mean_p))

    checks.record("parity_moments.pi_half_n1", parity_moments, Provenance.PUBLISHED, 1e-10)

    fit = None
    minima: np.ndarray | None = None

    def scaling() -> float:
        nonlocal fit, minima
        fit, minima = variance_scaling_fit(None, list(range(10, 41, 2)), reference, basis)
        return abs(fit.exponent - 1.5)

    checks.record("variance_scaling.exponent_offset", scaling, Provenance.PUBLISHED, 0.5)
    if minima is not None:
        checks.record(
            "variance_scaling.monotone",
            lambda: float(np.sum(np.diff(minima) >= 0.0)),
            Provenance.PUBLISHED,
            0.0,
        )
    if fit is not None:
        checks.record("variance_scaling.exponent", lambda: fit.exponent, Provenance.PUBLISHED)
        checks.record("variance_scaling.residual", lambda: fit.residual, Provenance.DERIVED, 0.2)
    return checks.results


def _commutator_suite(config: SystemConfig) -> list[SuiteResult]:
    checks = _Collector("commutator")
    pi_half: SystemConfig = config.with_updates(gamma=math.pi / 2)
    floor: float = COMMUTATOR_FLOOR * pi_half.hbar
    computed: dict[tuple[str, int], float] = {}

    def residual(factory: StateFactory, cutoff: int) -> float:
        key = (factory.__name__, cutoff)
        if key not in computed:
            computed[key] = commutator_residual(pi_half, cutoff, factory)
        return computed[key]

    def monotone(factory: StateFactory) -> float:
        coarse: float = residual(factory, COMMUTATOR_CUTOFFS[0])
        fine: float = residual(factory, COMMUTATOR_CUTOFFS[-1])
        if fine <= coarse or max(coarse, fine) <= floor:
            return 0.0
        return fine - coarse

    checks.record("monotone_in_cutoff", lambda: monotone(gaussian_test_state), Provenance.DERIVED)
    for cutoff in COMMUTATOR_CUTOFFS:
        checks.record(
            f"gaussian_state.n{cutoff}",
            lambda c=cutoff: residual(gaussian_test_state, c),
            Provenance.DERIVED,
        )
    checks.record(
        "gaussian_state.growth",
        lambda: residual(gaussian_test_state, COMMUTATOR_CUTOFFS[-1])
        / residual(gaussian_test_state, COMMUTATOR_CUTOFFS[0]),
        Provenance.DERIVED,
    )

    checks.record(
        "canonical_state.monotone_in_cutoff",
        lambda: monotone(canonical_test_state),
        Provenance.DERIVED,
        0.0,
    )
    for cutoff in (COMMUTATOR_CUTOFFS[0], COMMUTATOR_CUTOFFS[-1]):
        checks.record(
            f"canonical_state.n{cutoff}",
            lambda c=cutoff: residual(canonical_test_state, c),
            Provenance.DERIVED,
        )
    checks.record(
        "single_mode.n1",
        lambda: commutator_residual(pi_half, config.basis_cutoff, single_mode_state),
        Provenance.TRIVIAL,
    )

    def homogeneity() -> float:
        doubled: SystemConfig = pi_half.with_updates(hbar=2.0 * pi_half.hbar)
        base: float = commutator_residual(pi_half, 64, single_mode_state) / pi_half.hbar
        scaled: float = commutator_residual(doubled, 64, single_mode_state) / doubled.hbar
        return abs(scaled - base) / base

    checks.record("hbar_homogeneity", homogeneity, Provenance.TRIVIAL, 1e-10)
    return checks.results


def run_all(config: SystemConfig, suites: Iterable[str] | None = None) -> VerificationReport:
    """
    Run the selected suites and collate their entries.

    Checks that raise are recorded as failures, never propagated.

    Args:
        config: Base configuration; suites derive the phases they need from it
        suites: Suite names (default: all)

    Returns:
        VerificationReport sorted by suite and entry name

    Raises:
        LookupFailure: UNKNOWN_SUITE for an unknown suite name
    """
    selected: list[str] = sorted(set(suites or SUITES))
    unknown: list[str] = [name for name in selected if name not in SUITES]
    if unknown:
        raise LookupFailure(
            ErrorCode.UNKNOWN_SUITE,
            f"unknown suite '{unknown[0]}' (expected one of {', '.join(SUITES)})",
            {"suite": unknown[0]},
        )

    grid: PositionGrid = build_grid(config.grid_points, config.length_l)
    results: list[SuiteResult] = []
    for name in selected:
        logger.info("Suite started", suite=name)
        if name == "spectral":
            results += _spectral_suite(config, grid)
        elif name == "dynamics":
            results += _dynamics_suite(config, grid)
        else:
            results += _commutator_suite(config)
        logger.info("Suite finished", suite=name)

    results.sort(key=lambda result: (result.suite, result.name))
    timestamp: str = datetime.fromtimestamp(settings.source_date_epoch, tz=UTC).isoformat()
    report = VerificationReport(results=results, config=config.model_dump(), timestamp=timestamp)
    logger.info("Verification finished", entries=len(results), failures=len(report.failures()))
    return report

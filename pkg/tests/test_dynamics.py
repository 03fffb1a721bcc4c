"""Unitary evolution, collapse diagnostics and the arrival criteria."""

import math

import numpy as np
import pytest

from src.analytic_spectrum.service import analytic_eigenpair
from src.confined_basis.service import PlaneWaveBasis
from src.core.config import make_config
from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError, NumericalError
from src.core.grid import build_grid
from src.core.schemas import Branch, StateVector
from src.dynamics.service import (
    classical_trajectory,
    collapse_time,
    density_peak_time,
    evolve,
    fit_power_law,
    ideal_arrival_check,
    observables,
    time_reversal_defect,
    trace_evolution,
    trajectory_deviation,
    variance_minimum,
    variance_scaling_fit,
    zero_crossing_time,
)
from src.verification.service import single_mode_state


@pytest.fixture
def pi_half_pair(small_pi_half_config, grid_256):
    return analytic_eigenpair(None, 1, Branch.PLUS, small_pi_half_config, grid_256)


class TestEvolve:
    @pytest.mark.parametrize("t", [0.001, 0.01, 0.1])
    def test_unitary(self, small_pi_half_basis, pi_half_pair, t):
        coefficients = small_pi_half_basis.to_momentum(pi_half_pair.eigenfunction)
        evolved = evolve(coefficients, t, small_pi_half_basis)
        assert abs(evolved.norm - coefficients.norm) <= 1e-12

    def test_backward_undoes_forward(self, small_pi_half_basis, pi_half_pair):
        coefficients = small_pi_half_basis.to_momentum(pi_half_pair.eigenfunction)
        there = evolve(coefficients, 0.05, small_pi_half_basis)
        back = evolve(there, -0.05, small_pi_half_basis)
        assert np.max(np.abs(back.amplitudes - coefficients.amplitudes)) <= 1e-12

    def test_truncated_sampled_state_keeps_its_norm(self, small_pi_half_config, grid_256, pi_half_pair):
        coarse = PlaneWaveBasis(small_pi_half_config, grid_256, 4)
        state = pi_half_pair.eigenfunction
        evolved = evolve(state, 0.01, coarse)
        assert abs(evolved.norm - state.norm) <= 1e-12
        assert observables(evolved, coarse).var_q > 0

    def test_unnormalized_input_rejected(self, small_pi_half_basis):
        index_set = small_pi_half_basis.index_set
        state = StateVector.coefficients(2.0 * np.ones(index_set.size), index_set.basis_id)
        with pytest.raises(NumericalError) as exc:
            observables(state, small_pi_half_basis)
        assert exc.value.error_code is ErrorCode.NOT_NORMALIZED


class TestObservables:
    def test_parity_kills_odd_moments(self, small_pi_half_basis, pi_half_pair):
        moments = observables(pi_half_pair.eigenfunction, small_pi_half_basis)
        assert abs(moments.mean_q) <= 1e-10
        assert abs(moments.mean_p) <= 1e-10
        assert moments.var_q > 0

    def test_single_mode_is_uniform(self, small_pi_half_basis, small_pi_half_config):
        state = single_mode_state(small_pi_half_basis.index_set, small_pi_half_config, 2)
        moments = observables(state, small_pi_half_basis)
        assert moments.density_at_origin == pytest.approx(0.5, rel=1e-12)
        assert moments.mean_p == pytest.approx(2.5 * math.pi, rel=1e-12)
        assert moments.var_q == pytest.approx(1.0 / 3.0, rel=1e-10)


class TestTrace:
    def test_trace_shape_and_unitarity(self, small_pi_half_basis, pi_half_pair):
        trace = trace_evolution(pi_half_pair.eigenfunction, (0.0, 0.2), 300, small_pi_half_basis, snapshots=True)
        assert trace.times.size == trace.mean_q.size == 300
        assert trace.snapshots.shape == (300, small_pi_half_basis.grid.size)
        assert trace.norm_drift <= 1e-10

    def test_norms_are_not_renormalized(self, small_pi_half_basis, pi_half_pair):
        coefficients = small_pi_half_basis.to_momentum(pi_half_pair.eigenfunction)
        target = 1.0 + 5e-9
        scaled = StateVector.coefficients(coefficients.amplitudes * (target / coefficients.norm), coefficients.basis_id)
        trace = trace_evolution(scaled, (0.0, 0.2), 32, small_pi_half_basis)
        assert np.max(np.abs(trace.norms - target)) <= 1e-13

    def test_too_few_steps(self, small_pi_half_basis, pi_half_pair):
        with pytest.raises(DomainError):
            trace_evolution(pi_half_pair.eigenfunction, (0.0, 0.2), 8, small_pi_half_basis)

    def test_no_crossing_under_parity(self, small_pi_half_basis, pi_half_pair):
        trace = trace_evolution(pi_half_pair.eigenfunction, (0.0, 0.2), 64, small_pi_half_basis)
        with pytest.raises(NumericalError) as exc:
            zero_crossing_time(trace)
        assert exc.value.error_code is ErrorCode.NO_CROSSING

    def test_stationary_state_has_no_minimum(self, small_pi_half_basis, small_pi_half_config):
        state = single_mode_state(small_pi_half_basis.index_set, small_pi_half_config)
        with pytest.raises(NumericalError) as exc:
            variance_minimum(state, small_pi_half_basis, (0.0, 1.0))
        assert exc.value.error_code is ErrorCode.WINDOW_TOO_SMALL

    def test_single_mode_is_not_an_ideal_arrival(self, small_pi_half_basis, small_pi_half_config):
        state = single_mode_state(small_pi_half_basis.index_set, small_pi_half_config)
        report = ideal_arrival_check(state, small_pi_half_basis, (0.0, 1.0))
        assert not report.unique_minimum
        assert not report.passed

    def test_time_reversal_at_pi_half(self, small_pi_half_basis, small_pi_half_config, grid_256):
        plus = analytic_eigenpair(None, 1, Branch.PLUS, small_pi_half_config, grid_256)
        minus = analytic_eigenpair(None, 1, Branch.MINUS, small_pi_half_config, grid_256)
        times = np.linspace(0.0, 2.0 * plus.eigenvalue, 16)
        assert time_reversal_defect(plus.eigenfunction, minus.eigenfunction, times, small_pi_half_basis) <= 1e-8


class TestClassicalMotion:
    def test_at_rest(self):
        config = make_config({"gamma": 0.3})
        t = np.linspace(0.0, 5.0, 11)
        assert np.allclose(classical_trajectory(0.4, 0.0, t, config), 0.4)

    @pytest.mark.parametrize("t, expected", [(0.5, 0.5), (1.5, 0.5), (3.0, -1.0), (4.25, 0.25)])
    def test_specular_reflection(self, t, expected):
        config = make_config({"gamma": 0.3})
        assert classical_trajectory(0.0, 1.0, t, config) == pytest.approx(expected, abs=1e-12)

    def test_mass_slows_motion(self):
        config = make_config({"gamma": 0.3, "mass_mu": 2.0})
        assert classical_trajectory(-0.5, 1.0, 0.5, config) == pytest.approx(-0.25)


class TestPowerLaw:
    def test_exact_power_law(self):
        ns = np.arange(2, 12)
        fit = fit_power_law(ns, 3.0 * ns**-1.5)
        assert fit.exponent == pytest.approx(1.5, abs=1e-6)
        assert fit.prefactor == pytest.approx(3.0, rel=1e-6)
        assert fit.residual <= 1e-10
        assert fit.points == 10

    def test_too_few_points(self):
        with pytest.raises(NumericalError) as exc:
            fit_power_law(np.arange(1, 5), np.ones(4))
        assert exc.value.error_code is ErrorCode.INSUFFICIENT_DATA


@pytest.mark.slow
class TestReferenceDynamics:
    """gamma = 0.01 in natural units at the default truncation."""

    @pytest.fixture
    def basis(self, reference_config, grid_1024):
        return PlaneWaveBasis(reference_config, grid_1024)

    @pytest.mark.parametrize("n, tau", [(2, 0.0899), (6, 0.0276), (20, 0.0081)])
    def test_collapse_and_crossing_at_eigenvalue(self, basis, reference_config, grid_1024, n, tau):
        pair = analytic_eigenpair(None, n, Branch.PLUS, reference_config, grid_1024)
        window = (0.0, 2.0 * pair.eigenvalue)
        assert collapse_time(pair.eigenfunction, basis, window) == pytest.approx(tau, rel=0.05)
        trace = trace_evolution(pair.eigenfunction, window, 256, basis)
        assert zero_crossing_time(trace) == pytest.approx(tau, rel=0.05)

    def test_n20_is_an_ideal_arrival(self, basis, reference_config, grid_1024):
        pair = analytic_eigenpair(None, 20, Branch.PLUS, reference_config, grid_1024)
        window = (0.0, 2.0 * pair.eigenvalue)
        report = ideal_arrival_check(pair.eigenfunction, basis, window)
        assert report.passed
        assert report.mass_scaling_ratio == pytest.approx(2.0, abs=1e-9)
        trace = trace_evolution(pair.eigenfunction, window, 256, basis)
        assert density_peak_time(trace) == pytest.approx(pair.eigenvalue, rel=0.05)
        assert trace.norm_drift <= 1e-10

    def test_mass_scaling_uses_the_heavier_state(self, basis, reference_config, grid_1024):
        pair = analytic_eigenpair(None, 20, Branch.PLUS, reference_config, grid_1024)
        heavier_config = reference_config.with_updates(mass_mu=2.0 * reference_config.mass_mu)
        rebuilt = analytic_eigenpair(None, 20, Branch.PLUS, heavier_config, grid_1024)
        window = (0.0, 2.0 * pair.eigenvalue)
        report = ideal_arrival_check(pair.eigenfunction, basis, window, heavier_state=rebuilt.eigenfunction)
        assert report.mass_scaling_ratio == pytest.approx(2.0, abs=1e-9)

        stationary = single_mode_state(basis.index_set, reference_config)
        report = ideal_arrival_check(pair.eigenfunction, basis, window, heavier_state=stationary)
        assert report.mass_scaling_ratio is None
        assert not report.passed

    def test_minimum_variance_shrinks_with_n(self, basis, reference_config):
        _, minima = variance_scaling_fit(None, list(range(10, 41, 2)), reference_config, basis)
        assert np.all(np.diff(minima) < 0.0)

    def test_n2_follows_classical_path(self, basis, reference_config, grid_1024):
        pair = analytic_eigenpair(None, 2, Branch.PLUS, reference_config, grid_1024)
        trace = trace_evolution(pair.eigenfunction, (0.0, pair.eigenvalue), 256, basis)
        assert trajectory_deviation(trace, reference_config) <= 0.05

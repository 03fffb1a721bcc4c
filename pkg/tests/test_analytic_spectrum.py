"""Closed-form roots, eigenvalues, eigenfunctions and their classification."""

import math

import numpy as np
import pytest
from scipy import special

from src.analytic_spectrum.equations import Family, SpectralCase, characteristic_value
from src.analytic_spectrum.schemas import EigenfunctionVariant
from src.analytic_spectrum.service import (
    analytic_eigenpair,
    classify,
    eigenfunction,
    family_spectrum,
    geometric_invariance,
    kernel_residual,
    normalize_eigenfunction,
    spectrum,
)
from src.core.config import make_config
from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError, NumericalError
from src.core.grid import build_grid
from src.core.schemas import Branch, NodalTag, Parity
from src.special_functions import find_roots
from src.special_functions.roots import DEFAULT_SCAN_STEP


class TestSpectrum:
    @pytest.mark.parametrize("n, tau", [(2, 0.0899), (6, 0.0276), (20, 0.0081), (21, 0.0079)])
    def test_published_eigenvalues(self, reference_config, n, tau):
        entry = spectrum(None, reference_config, 21)[n - 1]
        assert entry.tau_plus == pytest.approx(tau, abs=5e-4)
        assert entry.tau_minus == -entry.tau_plus

    def test_second_root(self, reference_config):
        assert spectrum(None, reference_config, 2)[1].r == pytest.approx(1.0 / (4 * 0.0899), abs=0.02)

    def test_eigenvalue_scale(self):
        config = make_config({"gamma": 0.3, "mass_mu": 2.0, "length_l": 3.0, "hbar": 0.5})
        entry = spectrum(None, config, 1)[0]
        assert entry.tau_plus == pytest.approx(2.0 * 9.0 / (4 * 0.5) / entry.r, rel=1e-15)

    def test_pi_half_families(self, pi_half_config):
        even = family_spectrum(pi_half_config, Family.EVEN, 1)[0].r
        odd = family_spectrum(pi_half_config, Family.ODD, 1)[0].r
        assert even == pytest.approx(find_roots(lambda x: special.jv(-0.75, x), 10.0, 1).roots[0], abs=1e-10)
        assert odd == pytest.approx(find_roots(lambda x: special.jv(-0.25, x), 10.0, 1).roots[0], abs=1e-10)

    def test_merged_list_is_ascending_and_tagged(self, pi_half_config):
        entries = spectrum(None, pi_half_config, 8)
        assert [e.n for e in entries] == list(range(1, 9))
        assert all(a.r < b.r for a, b in zip(entries, entries[1:]))
        assert {e.parity for e in entries} == {Parity.EVEN, Parity.ODD}
        assert all(e.family_index is not None for e in entries)

    def test_periodic_and_pi_half_odd_roots_coincide(self, pi_half_config, periodic_config):
        periodic = [e.r for e in family_spectrum(periodic_config, Family.ODD, 4)]
        pi_half = [e.r for e in family_spectrum(pi_half_config, Family.ODD, 4)]
        assert periodic == pi_half

    @pytest.mark.parametrize("gamma", [0.01, 1.0])
    def test_roots_stable_when_scan_step_halved(self, gamma):
        def equation(x):
            return characteristic_value(x, SpectralCase.GENERIC, gamma)

        coarse = find_roots(equation, 44 * math.pi, 40).roots
        fine = find_roots(equation, 44 * math.pi, 40, step=DEFAULT_SCAN_STEP / 2).roots
        assert np.max(np.abs(fine - coarse)) <= 1e-10

    def test_case_must_match_gamma(self, reference_config):
        with pytest.raises(DomainError):
            spectrum(SpectralCase.PI_HALF, reference_config, 3)

    def test_split_family_needs_symmetric_phase(self, reference_config):
        with pytest.raises(DomainError):
            family_spectrum(reference_config, Family.EVEN, 3)

    def test_count_positive(self, reference_config):
        with pytest.raises(DomainError):
            spectrum(None, reference_config, 0)

    def test_characteristic_value_domain(self):
        with pytest.raises(DomainError):
            characteristic_value(0.0, SpectralCase.GENERIC, 0.01)

    def test_roots_beyond_bessel_range(self, reference_config):
        with pytest.raises(NumericalError) as exc:
            spectrum(None, reference_config, 400)
        assert exc.value.error_code is ErrorCode.ROOTS_NOT_FOUND


class TestEigenfunction:
    def test_finite_at_origin(self, reference_config):
        values = eigenfunction(None, 1, Branch.PLUS, np.array([-1.0, 0.0, 1.0]), reference_config)
        assert np.all(np.isfinite(values))

    def test_outside_box(self, reference_config):
        with pytest.raises(DomainError):
            eigenfunction(None, 1, Branch.PLUS, np.array([1.5]), reference_config)

    @pytest.mark.parametrize("gamma", ["pi/2", 0])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_branch_conjugation(self, gamma, n, grid_256):
        config = make_config({"gamma": gamma})
        plus = normalize_eigenfunction(eigenfunction(None, n, Branch.PLUS, grid_256.nodes, config), grid_256)
        minus = normalize_eigenfunction(eigenfunction(None, n, Branch.MINUS, grid_256.nodes, config), grid_256)
        overlap = np.sum(grid_256.weights * np.conj(minus.amplitudes) * np.conj(plus.amplitudes))
        assert abs(abs(overlap) - 1.0) <= 1e-8

    def test_normalized(self, reference_config, grid_256):
        state = normalize_eigenfunction(eigenfunction(None, 3, Branch.PLUS, grid_256.nodes, reference_config), grid_256)
        assert abs(state.norm - 1.0) <= 1e-12

    def test_odd_families_coincide_pointwise(self, pi_half_config, periodic_config, grid_256):
        periodic_odd = [e.n for e in spectrum(None, periodic_config, 6) if e.parity is Parity.ODD]
        pi_half_odd = [e.n for e in spectrum(None, pi_half_config, 6) if e.parity is Parity.ODD]
        for a, b in zip(periodic_odd, pi_half_odd):
            left = eigenfunction(None, a, Branch.PLUS, grid_256.nodes, periodic_config)
            right = eigenfunction(None, b, Branch.PLUS, grid_256.nodes, pi_half_config)
            assert np.max(np.abs(left - right)) <= 1e-10

    def test_variants_differ_only_off_symmetric_phases(self, pi_half_config, reference_config, grid_256):
        q = grid_256.nodes
        derived = eigenfunction(None, 2, Branch.PLUS, q, pi_half_config, EigenfunctionVariant.DERIVED)
        printed = eigenfunction(None, 2, Branch.PLUS, q, pi_half_config, EigenfunctionVariant.PRINTED)
        assert np.array_equal(derived, printed)
        derived = eigenfunction(None, 2, Branch.PLUS, q, reference_config, EigenfunctionVariant.DERIVED)
        printed = eigenfunction(None, 2, Branch.PLUS, q, reference_config, EigenfunctionVariant.PRINTED)
        assert not np.allclose(derived, printed)

    @pytest.mark.parametrize("gamma, n", [(0.01, 2), (0.3, 1), ("pi/2", 1), ("pi/2", 2)])
    def test_kernel_residual_of_derived_form(self, gamma, n, grid_1024):
        config = make_config({"gamma": gamma})
        assert kernel_residual(None, n, Branch.PLUS, config, grid_1024) <= 1e-3

    def test_kernel_residual_periodic_even(self, periodic_config, grid_1024):
        n = next(e.n for e in spectrum(None, periodic_config, 4) if e.parity is Parity.EVEN)
        assert kernel_residual(None, n, Branch.PLUS, periodic_config, grid_1024) <= 1e-3

    def test_geometric_invariance(self, reference_config, grid_256):
        check = geometric_invariance(None, 3, reference_config, grid_256)
        assert check.max_sample_difference <= 1e-12
        assert check.tau_ratio == pytest.approx(check.expected_ratio, rel=1e-12)


class TestClassify:
    def test_pi_half_even_family_is_non_nodal(self, pi_half_config, grid_256):
        for n in (e.n for e in spectrum(None, pi_half_config, 6) if e.parity is Parity.EVEN):
            pair = analytic_eigenpair(None, n, Branch.PLUS, pi_half_config, grid_256)
            assert (pair.parity, pair.nodal) == (Parity.EVEN, NodalTag.NON_NODAL)

    def test_pi_half_odd_family_is_nodal(self, pi_half_config, grid_256):
        for n in (e.n for e in spectrum(None, pi_half_config, 6) if e.parity is Parity.ODD):
            pair = analytic_eigenpair(None, n, Branch.PLUS, pi_half_config, grid_256)
            assert (pair.parity, pair.nodal) == (Parity.ODD, NodalTag.NODAL)

    @pytest.mark.parametrize("n, expected", [(20, NodalTag.NON_NODAL), (21, NodalTag.NODAL)])
    def test_reference_eigenfunctions(self, reference_config, grid_1024, n, expected):
        pair = analytic_eigenpair(None, n, Branch.PLUS, reference_config, grid_1024)
        assert pair.parity is Parity.NONE
        assert pair.nodal is expected
        assert pair.eigenvalue == pytest.approx(spectrum(None, reference_config, n)[n - 1].tau_plus)

    def test_mixed_parity_is_ambiguous(self, grid_256):
        samples = np.exp(-((grid_256.nodes - 0.3) ** 2))
        with pytest.raises(NumericalError) as exc:
            classify(samples, grid_256, math.pi / 2)
        assert exc.value.error_code is ErrorCode.AMBIGUOUS_CLASSIFICATION

    def test_two_nodes_are_ambiguous(self, grid_256):
        samples = (grid_256.nodes**2 - 0.25).astype(complex)
        with pytest.raises(NumericalError):
            classify(samples, grid_256, 0.3)

    @pytest.mark.parametrize("offset, expected", [(0.002, NodalTag.NODAL), (0.01, NodalTag.NON_NODAL)])
    def test_generic_phase_near_zero(self, grid_256, offset, expected):
        samples = grid_256.nodes + 1j * offset
        assert classify(samples, grid_256, 0.3) == (Parity.NONE, expected)

    def test_lowest_reference_state_is_nodal_without_exact_zero(self, reference_config, grid_1024):
        pair = analytic_eigenpair(None, 1, Branch.PLUS, reference_config, grid_1024)
        density = np.abs(pair.eigenfunction.amplitudes) ** 2
        assert np.min(density) / np.max(density) > 1e-8
        assert pair.nodal is NodalTag.NODAL

"""Plane-wave eigenbasis of the twisted momentum and the basis transforms."""

import math

import numpy as np
import pytest

from src.confined_basis.schemas import MomentumIndexSet
from src.confined_basis.service import (
    PlaneWaveBasis,
    basis_function,
    energy_eigenvalue,
    inverse_momenta,
    momentum_eigenvalue,
    to_momentum,
    to_position,
)
from src.core.config import make_config
from src.core.error_codes import ErrorCode
from src.core.exceptions import DomainError, NumericalError
from src.core.grid import build_grid
from src.core.schemas import Representation, StateVector


class TestEigenvalues:
    def test_momentum_at_pi_half(self):
        assert momentum_eigenvalue(0, make_config({"gamma": "pi/2"})) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_momentum_periodic(self):
        assert momentum_eigenvalue(1, make_config({"gamma": 0})) == pytest.approx(math.pi, abs=1e-15)

    def test_energy_periodic(self):
        assert energy_eigenvalue(1, make_config({"gamma": 0})) == pytest.approx(math.pi**2 / 2, rel=1e-15)

    def test_null_mode(self):
        with pytest.raises(DomainError) as exc:
            momentum_eigenvalue(0, make_config({"gamma": 0}))
        assert exc.value.error_code is ErrorCode.NULL_MODE

    def test_units(self):
        config = make_config({"gamma": 0.3, "hbar": 2.0, "length_l": 0.5})
        assert momentum_eigenvalue(2, config) == pytest.approx(2.0 * (0.3 + 2 * math.pi) / 0.5, rel=1e-15)

    def test_boundary_condition(self):
        config = make_config({"gamma": 0.7, "length_l": 1.5})
        left = basis_function(3, -1.5, config)
        right = basis_function(3, 1.5, config)
        assert abs(left - np.exp(-2j * 0.7) * right) <= 1e-14


class TestIndexSet:
    def test_generic_window(self):
        index_set = MomentumIndexSet.build(8, 0.01)
        assert index_set.indices[0] == -8 and index_set.indices[-1] == 8
        assert index_set.reflection() is None
        assert not index_set.null_mode_projected

    def test_pi_half_window_is_reflection_closed(self):
        index_set = MomentumIndexSet.build(8, math.pi / 2)
        assert index_set.indices[0] == -9 and index_set.indices[-1] == 8
        permutation = index_set.reflection()
        assert sorted(permutation.tolist()) == list(range(index_set.size))

    def test_periodic_window(self):
        index_set = MomentumIndexSet.build(4, 0.0)
        assert index_set.null_mode_projected
        assert 0 in index_set.indices
        assert index_set.size == 9
        assert index_set.position(0) == 4

    def test_inverse_momenta_pseudo_inverse(self):
        config = make_config({"gamma": 0, "basis_cutoff": 8})
        index_set = MomentumIndexSet.build(8, 0.0)
        inverse = inverse_momenta(index_set, config)
        assert inverse[index_set.position(0)] == 0.0
        assert inverse[index_set.position(1)] == pytest.approx(1 / math.pi)

    def test_position_outside_window(self):
        with pytest.raises(IndexError):
            MomentumIndexSet.build(4, 0.1).position(5)


class TestTransforms:
    @pytest.fixture
    def basis(self) -> PlaneWaveBasis:
        config = make_config({"gamma": 0.3, "basis_cutoff": 32, "grid_points": 256})
        return PlaneWaveBasis(config, build_grid(256, 1.0))

    @pytest.fixture
    def gaussian(self, basis: PlaneWaveBasis) -> StateVector:
        q = basis.grid.nodes
        return StateVector.sampled(np.exp(-((q / 0.2) ** 2)) * np.exp(3j * q), basis.grid).normalize()

    def test_plane_wave_projects_onto_its_label(self, basis):
        samples = basis_function(3, basis.grid.nodes, basis.config)
        coefficients = to_momentum(StateVector.sampled(samples, basis.grid), basis).amplitudes
        target = basis.index_set.position(3)
        assert abs(coefficients[target] - 1.0) <= 1e-10
        others = np.delete(coefficients, target)
        assert np.max(np.abs(others)) <= 1e-10

    def test_parseval(self):
        config = make_config({"gamma": 0.3, "basis_cutoff": 64, "grid_points": 512})
        grid = build_grid(512, 1.0)
        basis = PlaneWaveBasis(config, grid)
        state = StateVector.sampled(np.exp(-((grid.nodes - 0.1) / 0.2) ** 2), grid).normalize()
        assert abs(basis.parseval_defect(state)) <= 1e-8

    def test_round_trip(self, basis, gaussian):
        coefficients = to_momentum(gaussian, basis)
        assert coefficients.representation is Representation.MOMENTUM_COEFFICIENTS
        back = to_position(coefficients, basis)
        assert np.max(np.abs(back.amplitudes - gaussian.amplitudes)) <= 1e-8

    def test_evaluate_matches_to_position(self, basis, gaussian):
        coefficients = to_momentum(gaussian, basis).amplitudes
        assert np.allclose(basis.evaluate(coefficients, basis.grid.nodes), basis.matrix @ coefficients, atol=1e-12)

    def test_representation_mismatch(self, basis, gaussian):
        with pytest.raises(NumericalError) as exc:
            to_position(gaussian, basis)
        assert exc.value.error_code is ErrorCode.REPRESENTATION_MISMATCH

    def test_grid_length_mismatch(self):
        with pytest.raises(DomainError):
            PlaneWaveBasis(make_config({"gamma": 0.3}), build_grid(32, 2.0))

    def test_reflection_at_pi_half(self, small_pi_half_basis):
        grid = small_pi_half_basis.grid
        state = StateVector.sampled(np.exp(-((grid.nodes - 0.2) / 0.2) ** 2), grid).normalize()
        coefficients = small_pi_half_basis.to_momentum(state)
        mirrored = small_pi_half_basis.to_position(small_pi_half_basis.reflect(coefficients))
        direct = small_pi_half_basis.to_position(coefficients)
        assert np.max(np.abs(mirrored.amplitudes - direct.amplitudes[::-1])) <= 1e-10

#!/usr/bin/env python3
"""
🧪 Reference-solution checks: two-center closed forms and brute-force det roots
"""

import numpy as np
import pytest

from conftest import build_random_model
from src.exact import (brute_force_detroot, exact_two_center_1d, exact_two_center_3d,
                       numeric_two_center_2d, scaled_det)
from src.models import Family, ModelSpec, eval_phi
from src.spectra import eigvals_sym, find_bound_states
from src.utils.errors import DomainError, NoSecondRootError, SingleStateError


def _smallest_eigenvalue(model, E):
    return float(np.min(np.abs(eigvals_sym(eval_phi(model, E)))))


class TestOneDimension:
    @pytest.mark.parametrize("a", [2.0, 5.0, 10.0, 20.0])
    def test_lambert_matches_bisection(self, a):
        lam = 1.0
        closed = exact_two_center_1d(lam, a)
        bisected = exact_two_center_1d(lam, a, method="bisection")
        assert bisected.method == "bisection"
        assert closed.e_minus == pytest.approx(bisected.e_minus, rel=1e-12)
        assert closed.e_plus == pytest.approx(bisected.e_plus, rel=1e-12)
        assert closed.splitting == pytest.approx(bisected.splitting, rel=1e-12, abs=1e-14)

    def test_residual_at_a_ten(self):
        result = exact_two_center_1d(1.0, 10.0)
        nu_sym, nu_anti = np.sqrt(-result.e_minus), np.sqrt(-result.e_plus)
        assert abs(2.0 * nu_sym - 1.0 - np.exp(-20.0 * nu_sym)) < 1e-14
        assert abs(2.0 * nu_anti - 1.0 + np.exp(-20.0 * nu_anti)) < 1e-14

    def test_levels_approach_isolated_energy(self):
        results = [exact_two_center_1d(1.0, a) for a in (2.0, 4.0, 8.0, 16.0, 32.0)]
        for near, far in zip(results, results[1:]):
            assert near.e_minus < far.e_minus < -0.25 < far.e_plus < near.e_plus < 0.0
        assert results[-1].splitting < 1e-12

    def test_energies_make_phi_singular(self):
        result = exact_two_center_1d(1.3, 4.0)
        model = ModelSpec.from_positions(Family.POINT_1D, [-4.0, 4.0], couplings=(1.3, 1.3), degenerate=True)
        for E in (result.e_minus, result.e_plus):
            assert _smallest_eigenvalue(model, E) <= 1e-10

    def test_single_state_regime(self):
        with pytest.raises(SingleStateError):
            exact_two_center_1d(1.0, 1.0)
        with pytest.raises(SingleStateError):
            exact_two_center_1d(2.0, 0.25, method="bisection")

    def test_parameters_must_be_positive(self):
        with pytest.raises(DomainError):
            exact_two_center_1d(0.0, 5.0)
        with pytest.raises(DomainError):
            exact_two_center_1d(1.0, -5.0)


class TestThreeDimensions:
    @pytest.mark.parametrize("a", [1.0, 2.5, 5.0, 10.0])
    def test_lambert_matches_bisection(self, a):
        closed = exact_two_center_3d(1.0, a)
        bisected = exact_two_center_3d(1.0, a, method="bisection")
        assert closed.method == "lambert"
        assert closed.e_minus == pytest.approx(bisected.e_minus, rel=1e-12)
        assert closed.e_plus == pytest.approx(bisected.e_plus, rel=1e-12)
        assert closed.splitting == pytest.approx(bisected.splitting, rel=1e-10, abs=1e-14)

    def test_splitting_positive(self):
        result = exact_two_center_3d(1.0, 2.0)
        assert result.e_minus < -1.0 < result.e_plus < 0.0
        assert result.splitting > 0.0
        assert result.splitting == pytest.approx(result.e_plus - result.e_minus, rel=1e-12)

    def test_energies_make_phi_singular(self):
        result = exact_two_center_3d(0.8, 3.0)
        model = ModelSpec.from_positions(Family.POINT_3D, [(0.0, 0.0, -3.0), (0.0, 0.0, 3.0)],
                                         binding_energies=(-0.64, -0.64), degenerate=True)
        for E in (result.e_minus, result.e_plus):
            assert _smallest_eigenvalue(model, E) <= 1e-10

    def test_single_state_regime(self):
        with pytest.raises(SingleStateError):
            exact_two_center_3d(1.0, 0.5)


class TestTwoDimensions:
    def test_levels_straddle_isolated_energy(self):
        result = numeric_two_center_2d(1.0, 6.0)
        assert result.e_minus < -1.0 < result.e_plus < 0.0
        assert result.splitting == pytest.approx(result.e_plus - result.e_minus, rel=1e-10)
        assert result.to_dict()['family'] == "Point2D"

    def test_energies_make_phi_singular(self):
        result = numeric_two_center_2d(1.0, 4.0)
        model = ModelSpec.from_positions(Family.POINT_2D, [(-4.0, 0.0), (4.0, 0.0)],
                                         binding_energies=(-1.0, -1.0), degenerate=True)
        for E in (result.e_minus, result.e_plus):
            assert _smallest_eigenvalue(model, E) <= 1e-10

    def test_matches_bound_state_solver(self):
        model = ModelSpec.from_positions(Family.POINT_2D, [(-3.0, 0.0), (3.0, 0.0)],
                                         binding_energies=(-1.0, -1.0), degenerate=True)
        states = find_bound_states(model)
        result = numeric_two_center_2d(1.0, 3.0)
        assert [s.energy for s in states] == [pytest.approx(result.e_minus, rel=1e-10),
                                              pytest.approx(result.e_plus, rel=1e-10)]

    def test_no_second_root_near_threshold(self):
        with pytest.raises(NoSecondRootError):
            numeric_two_center_2d(1.0, 0.5)


class TestBruteForce:
    def test_single_center(self):
        model = ModelSpec.from_positions(Family.POINT_3D, [(0.0, 0.0, 0.0)], binding_energies=(-1.0,))
        roots = brute_force_detroot(model)
        assert roots == [pytest.approx(-1.0, rel=1e-12)]

    def test_scaled_det_sign(self, point3d_three):
        assert scaled_det(point3d_three, -3.0) > 0.0
        assert scaled_det(point3d_three, -0.9) < 0.0

    def test_agrees_with_solver_on_random_models(self, rng):
        for _ in range(5):
            model = build_random_model(Family.POINT_3D, rng)
            expected = [s.energy for s in find_bound_states(model)]
            roots = brute_force_detroot(model)
            assert len(roots) == len(expected)
            np.testing.assert_allclose(roots, expected, rtol=0.0, atol=1e-10)

    def test_salpeter_pair(self):
        model = ModelSpec.from_positions(Family.SALPETER_1D, [0.0, 30.0], binding_energies=(0.5, 0.3), mass=1.0)
        roots = brute_force_detroot(model)
        assert roots == [pytest.approx(0.3, abs=1e-8), pytest.approx(0.5, abs=1e-8)]

    def test_grid_validation(self, point3d_three):
        with pytest.raises(DomainError):
            brute_force_detroot(point3d_three, grid_n=2)
        with pytest.raises(DomainError):
            brute_force_detroot(point3d_three, window=(-0.5, -1.0))

#!/usr/bin/env python3
"""
🧪 Perturbation checks: tunneling shifts, closed forms, degenerate pairs, curve forms, corrections
"""

import numpy as np
import pytest

from src.exact import exact_two_center_1d, exact_two_center_3d, numeric_two_center_2d
from src.geometry import circle
from src.models import Family, ModelSpec, eval_phi
from src.perturbation import (asymptotic_splitting, com_distance, com_offdiag, curve_shift,
                              degenerate_splitting, eigvec_first_order, family_shift_closed_form,
                              family_shift_log, perturbative_shift, wavefunction_correction)
from src.spectra import eig_sym, find_bound_states, free_kernel, wavefunction
from src.specfun import bessel_k0
from src.utils.errors import (DegeneracyError, DomainError, ModelError, OverlapError, SingularityError,
                              UnsupportedFamilyError)


def _pair(family, d, **params):
    dim = Family(family).dimension
    if dim == 1:
        return ModelSpec.from_positions(family, [0.0, d], **params)
    return ModelSpec.from_positions(family, [[0.0] * dim, [d] + [0.0] * (dim - 1)], **params)


def _circles(radius, separation, couplings=(2.0, 1.6), order=32):
    curves = (circle((0.0, 0.0), radius), circle((separation, 0.0), radius))
    return ModelSpec(Family.CURVE_2D, curves, couplings=couplings, quad_order=order)


class TestPerturbativeShift:
    def test_point1d_example(self):
        model = _pair(Family.POINT_1D, 20.0, couplings=(1.0, 0.8))
        report = perturbative_shift(model, 0)
        assert report.zeroth_order == pytest.approx(-0.25)
        assert report.shift == pytest.approx(-2.0 * np.exp(-20.0), rel=1e-12)

    def test_single_center_does_not_move(self):
        model = ModelSpec.from_positions(Family.POINT_2D, [(0.0, 0.0)], binding_energies=(-1.0,))
        report = perturbative_shift(model, 0)
        assert report.shift == 0.0 and report.contributions == () and report.log_abs_shift == -np.inf

    def test_point3d_against_solver(self):
        model = _pair(Family.POINT_3D, 12.0, binding_energies=(-1.0, -0.5))
        report = perturbative_shift(model, 0)
        ground = find_bound_states(model)[0]
        exact_shift = ground.energy - (-1.0)
        assert report.shift < 0.0
        assert abs(report.shift - exact_shift) < 0.2 * abs(exact_shift)

    def test_levels_repel(self):
        model = _pair(Family.POINT_3D, 6.0, binding_energies=(-1.0, -0.64))
        lower, upper = perturbative_shift(model, 0), perturbative_shift(model, 1)
        assert lower.sign == -1.0 and upper.sign == 1.0
        states = find_bound_states(model)
        for report, state in zip((lower, upper), states):
            checked = report.with_oracle(state.energy)
            assert checked.relative_error < 1e-3
            assert checked.energy == pytest.approx(state.energy, rel=1e-7)

    def test_report_structure(self, point3d_three):
        report = perturbative_shift(point3d_three, 1)
        assert [l for l, _ in report.contributions] == [0, 2]
        assert report.shift == pytest.approx(sum(t for _, t in report.contributions), rel=1e-12)
        assert abs(report.shift) <= sum(abs(t) for _, t in report.contributions)
        assert 0.0 < report.dominance_ratio < 1e-3
        payload = report.to_dict()
        assert payload['oracle_energy'] is None
        assert [c['partner'] for c in payload['contributions']] == [0, 2]

    def test_log_domain_survives_underflow(self):
        model = _pair(Family.POINT_1D, 3000.0, couplings=(1.0, 1.5))
        report = perturbative_shift(model, 0)
        assert report.shift == 0.0
        assert report.log_abs_shift == pytest.approx(np.log(0.5) - 3000.0 + np.log(3.0), rel=1e-14)
        log_abs, sign = family_shift_log(model, 0)
        assert sign == 1.0
        assert log_abs == pytest.approx(report.log_abs_shift, rel=1e-12)

    def test_degenerate_model_rejected(self, point1d_pair):
        with pytest.raises(DegeneracyError):
            perturbative_shift(point1d_pair, 0)
        with pytest.raises(DegeneracyError):
            family_shift_closed_form(point1d_pair, 0)

    def test_resonant_partner_rejected(self):
        model = _pair(Family.POINT_1D, 10.0, couplings=(1.0, 1.0 + 1e-10))
        with pytest.raises(DegeneracyError, match="resonant"):
            perturbative_shift(model, 0)

    def test_branch_out_of_range(self, point3d_three):
        with pytest.raises(DomainError):
            perturbative_shift(point3d_three, 3)


class TestClosedForms:
    def test_point1d_is_the_generic_formula(self):
        model = _pair(Family.POINT_1D, 20.0, couplings=(1.0, 0.8))
        for k in (0, 1):
            assert family_shift_closed_form(model, k) == pytest.approx(perturbative_shift(model, k).shift, rel=1e-12)

    def test_point2d_example(self):
        model = _pair(Family.POINT_2D, 15.0, binding_energies=(-1.0, -0.25))
        closed = family_shift_closed_form(model, 0)
        assert closed == pytest.approx(-2.0 * np.pi / (15.0 * np.log(4.0)) * np.exp(-30.0), rel=1e-12)
        assert 0.8 <= closed / perturbative_shift(model, 0).shift <= 1.2

    def test_hyperbolic_space_example(self):
        model = ModelSpec(Family.POINT_H3, distance_matrix=((0.0, 10.0), (10.0, 0.0)),
                          binding_energies=(0.5, 0.2), kappa=1.0)
        for k in (0, 1):
            closed = family_shift_closed_form(model, k)
            generic = perturbative_shift(model, k).shift
            assert np.isfinite(closed) and closed != 0.0
            assert 0.8 <= closed / generic <= 1.25

    @pytest.mark.parametrize("model", [
        _pair(Family.SALPETER_1D, 30.0, binding_energies=(0.5, 0.3), mass=1.0),
        _pair(Family.RELATIVISTIC_2D, 30.0, binding_energies=(-0.5, 0.3), mass=1.0),
    ], ids=["salpeter", "relativistic2d"])
    def test_relativistic_closed_forms(self, model):
        for k in (0, 1):
            ratio = family_shift_closed_form(model, k) / perturbative_shift(model, k).shift
            assert 0.8 <= ratio <= 1.25

    def test_hyperbolic_plane_sign_matches_solver(self):
        model = ModelSpec(Family.POINT_H2, distance_matrix=((0.0, 8.0), (8.0, 0.0)),
                          binding_energies=(-1.0, -0.3), kappa=1.0)
        ground = find_bound_states(model)[0]
        closed = family_shift_closed_form(model, 0)
        assert closed < 0.0 and ground.energy < -1.0
        assert 0.8 <= closed / perturbative_shift(model, 0).shift <= 1.25

    def test_curves_have_no_closed_form(self):
        with pytest.raises(UnsupportedFamilyError):
            family_shift_closed_form(_circles(1.0, 12.0, order=8), 0)


class TestDegenerateSplitting:
    def test_point1d_first_order_is_the_asymptotic(self, point1d_pair):
        result = degenerate_splitting(point1d_pair)
        assert result.half_separation == 10.0
        assert result.first_order == pytest.approx(np.exp(-10.0), rel=1e-12)
        assert result.asymptotic == pytest.approx(np.exp(-10.0), rel=1e-12)
        assert result.e_minus < result.binding_energy < result.e_plus

    def test_point1d_against_closed_form(self, point1d_pair):
        result = degenerate_splitting(point1d_pair)
        exact = exact_two_center_1d(1.0, 10.0)
        assert result.splitting == pytest.approx(exact.splitting, rel=0.01)
        assert result.e_minus == pytest.approx(exact.e_minus, rel=1e-6)

    def test_point2d_against_numeric_oracle(self):
        model = _pair(Family.POINT_2D, 12.0, binding_energies=(-1.0, -1.0), degenerate=True)
        result = degenerate_splitting(model)
        oracle = numeric_two_center_2d(1.0, 6.0)
        assert abs(result.splitting - oracle.splitting) < 0.1 * oracle.splitting

    def test_point3d_against_closed_form(self):
        model = _pair(Family.POINT_3D, 10.0, binding_energies=(-1.0, -1.0), degenerate=True)
        result = degenerate_splitting(model)
        exact = exact_two_center_3d(1.0, 5.0)
        assert result.splitting == pytest.approx(exact.splitting, rel=0.05)
        assert result.asymptotic == pytest.approx(asymptotic_splitting(Family.POINT_3D, -1.0, 5.0))

    def test_splitting_closes_with_distance(self):
        results = [degenerate_splitting(_pair(Family.POINT_3D, 2.0 * a, binding_energies=(-1.0, -1.0),
                                              degenerate=True)) for a in (3.0, 5.0, 8.0)]
        assert all(r1.splitting > r2.splitting for r1, r2 in zip(results, results[1:]))
        assert abs(results[-1].e_minus + 1.0) < abs(results[0].e_minus + 1.0)

    def test_general_family(self):
        model = _pair(Family.SALPETER_1D, 8.0, binding_energies=(0.3, 0.3), mass=1.0, degenerate=True)
        result = degenerate_splitting(model)
        assert result.e_minus < 0.3 < result.e_plus
        assert result.asymptotic is None
        assert result.to_dict()['asymptotic'] is None

    def test_symmetric_level_is_the_ground_state(self, point1d_pair):
        ground = find_bound_states(point1d_pair)[0]
        result = degenerate_splitting(point1d_pair)
        assert ground.energy == pytest.approx(result.e_minus, rel=1e-6)
        assert ground.eigenvector[0] == pytest.approx(ground.eigenvector[1])

    def test_needs_two_identical_centers(self, point3d_three):
        with pytest.raises(ModelError):
            degenerate_splitting(point3d_three)
        with pytest.raises(DegeneracyError):
            degenerate_splitting(_pair(Family.POINT_3D, 8.0, binding_energies=(-1.0, -0.5)))


class TestEigvecCorrection:
    def test_single_center_is_zero(self):
        model = ModelSpec.from_positions(Family.POINT_2D, [(0.0, 0.0)], binding_energies=(-1.0,))
        np.testing.assert_array_equal(eigvec_first_order(model, 0).vector, [0.0])

    def test_point2d_example(self):
        model = _pair(Family.POINT_2D, 10.0, binding_energies=(-1.0, -0.25))
        vector = eigvec_first_order(model, 0).vector
        assert vector[0] == 0.0
        assert vector[1] == pytest.approx(bessel_k0(10.0) / np.log(2.0), rel=1e-12)

    def test_matches_exact_eigenvector(self):
        model = _pair(Family.POINT_2D, 10.0, binding_energies=(-1.0, -0.25))
        values, vectors = eig_sym(eval_phi(model, -1.0))
        near_zero = np.argmin(np.abs(values))
        exact = vectors[:, near_zero] / vectors[0, near_zero]
        assert eigvec_first_order(model, 0).vector[1] == pytest.approx(exact[1], rel=1e-8)

    def test_relabeling_permutes_components(self, point3d_three):
        a, b, c = point3d_three.centers
        swapped = ModelSpec(Family.POINT_3D, (c, a, b), binding_energies=(-0.81, -1.0, -0.64))
        original = eigvec_first_order(point3d_three, 0).vector
        permuted = eigvec_first_order(swapped, 1).vector
        np.testing.assert_allclose(permuted, original[[2, 0, 1]], rtol=1e-13)


class TestWavefunctionCorrection:
    def test_single_center_is_zero(self):
        model = ModelSpec.from_positions(Family.POINT_2D, [(0.0, 0.0)], binding_energies=(-1.0,))
        assert wavefunction_correction(model, 0, (1.0, 1.0)) == 0.0

    def test_decay_with_separation(self):
        offset = np.array([1.0, 0.5])
        near = _pair(Family.POINT_2D, 8.0, binding_energies=(-1.0, -0.25))
        far = _pair(Family.POINT_2D, 16.0, binding_energies=(-1.0, -0.25))
        ratio = (wavefunction_correction(far, 0, np.array([16.0, 0.0]) + offset)
                 / wavefunction_correction(near, 0, np.array([8.0, 0.0]) + offset))
        assert ratio == pytest.approx(bessel_k0(16.0) / bessel_k0(8.0), rel=1e-12)
        asymptotic = (wavefunction_correction(far, 0, np.array([16.0, 0.0]) + offset, asymptotic=True)
                      / wavefunction_correction(near, 0, np.array([8.0, 0.0]) + offset, asymptotic=True))
        assert asymptotic == pytest.approx(np.exp(-8.0) / np.sqrt(2.0), rel=1e-12)

    def test_first_order_wavefunction_near_partner(self):
        model = _pair(Family.POINT_2D, 12.0, binding_energies=(-1.0, -0.25))
        ground = find_bound_states(model)[0]
        theta = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
        ring = np.column_stack([12.0 + np.cos(theta), np.sin(theta)])
        alpha0 = np.sqrt(4.0 * np.pi)
        psi0 = alpha0 * free_kernel(2, 1.0, np.linalg.norm(ring, axis=1))
        approx = psi0 + wavefunction_correction(model, 0, ring)
        exact = wavefunction(ground, model, ring)
        np.testing.assert_allclose(approx, exact, rtol=0.05)

    def test_only_point2d(self, point3d_three):
        with pytest.raises(UnsupportedFamilyError):
            wavefunction_correction(point3d_three, 0, (1.0, 1.0, 1.0))

    def test_center_is_singular(self):
        model = _pair(Family.POINT_2D, 8.0, binding_energies=(-1.0, -0.25))
        with pytest.raises(SingularityError):
            wavefunction_correction(model, 0, (8.0, 0.0))


class TestCurveShift:
    def test_center_of_mass_form_tracks_quadrature(self):
        model = _circles(1.0, 12.0)
        for k in (0, 1):
            result = curve_shift(model, k)
            assert 0.7 <= result.ratio <= 1.3
            assert result.com_distances == (pytest.approx(12.0, abs=1e-9),)
            assert np.sign(result.center_of_mass_form) == np.sign(result.quadrature_form)

    def test_remainder_scales_with_radius_squared(self):
        E = -0.25

        def deviation(radius):
            model = _circles(radius, 12.0)
            exact = eval_phi(model, E)[0, 1]
            com = com_offdiag(model, E, 0, 1)
            return abs(exact - com) / abs(com)

        assert 3.0 <= deviation(1.0) / deviation(0.5) <= 5.0

    def test_center_of_mass_distance(self):
        model = ModelSpec(Family.CURVE_3D, (circle((0.0, 0.0, 0.0), 1.0), circle((6.0, 8.0, 0.0), 1.0)),
                          binding_energies=(-1.0, -0.5), quad_order=8)
        assert com_distance(model, 0, 1) == pytest.approx(10.0, abs=1e-9)

    def test_wide_curves_rejected(self):
        with pytest.raises(OverlapError):
            curve_shift(_circles(2.0, 6.0, order=8), 0)

    def test_single_curve(self):
        model = ModelSpec(Family.CURVE_2D, (circle((0.0, 0.0), 1.0, n_samples=256),), couplings=(2.0,),
                          quad_order=16)
        result = curve_shift(model, 0)
        assert result.center_of_mass_form == 0.0 and result.ratio == 1.0

    def test_point_models_rejected(self, point3d_three):
        with pytest.raises(UnsupportedFamilyError):
            curve_shift(point3d_three, 0)
        with pytest.raises(UnsupportedFamilyError):
            com_offdiag(point3d_three, -1.0, 0, 1)

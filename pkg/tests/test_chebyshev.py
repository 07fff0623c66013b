import numpy as np
import pytest

from chebsvd import (OutsideDomainWarning, SpectrumBounds, StepSpec,
                     apply_filter, build_filter, degree_for_projector_gap,
                     evaluate_scalar, fourier_coefficients,
                     jackson_factors, pointwise_error_bound,
                     projector_error_bound, select_degree, target_step,
                     unit_interval_filter)
from chebsvd.chebyshev import jackson_factors_autocorrelation
from conftest import random_sparse


class TestCoefficients:
    def test_whole_interval(self):
        c = fourier_coefficients(np.pi, 0.0, 6)
        assert c[0] == 1.0
        assert np.all(np.abs(c[1:]) < 1e-13)

    def test_half_interval(self):
        c = fourier_coefficients(np.pi / 2, 0.0, 2)
        assert c[0] == pytest.approx(0.5, abs=0)
        assert c[1] == pytest.approx(2.0 / np.pi, rel=1e-15)
        assert abs(c[2]) < 1e-15  # sin(pi) / 2 up to rounding

    def test_preconditions(self):
        with pytest.raises(ValueError):
            fourier_coefficients(0.5, 0.7, 3)
        with pytest.raises(ValueError):
            fourier_coefficients(2.0, 1.0, -1)


class TestJackson:
    def test_j0_is_one_exactly(self):
        for d in (0, 1, 2, 17, 137):
            assert jackson_factors(d)[0] == 1.0

    def test_d2_values(self):
        rho = jackson_factors(2)
        assert rho[1] == pytest.approx(np.sqrt(2.0) / 2.0, rel=1e-15)
        assert rho[2] == pytest.approx(0.25, rel=1e-14)

    def test_range(self):
        for d in (1, 5, 40):
            rho = jackson_factors(d)
            assert np.all(rho > 0.0) and np.all(rho <= 1.0)

    @pytest.mark.parametrize("d", [1, 2, 5, 17, 64, 200])
    def test_autocorrelation_crosscheck(self, d):
        a = jackson_factors(d)
        b = jackson_factors_autocorrelation(d)
        assert np.max(np.abs(a - b)) <= 1e-12


class TestSelectDegree:
    @pytest.mark.parametrize("norm, smin, a, b, D, want", [
        (14.4, 0.0, 11.0, 12.0, 2.0, 137),
        (14.4, 0.0, 11.0, 12.0, 4.0, 276),
        (5.53, 0.370, 4.1, 4.3, 2.0, 365),
        (5.53, 0.370, 4.1, 4.3, 4.0, 732),
    ])
    def test_published_degrees(self, norm, smin, a, b, D, want):
        bounds = SpectrumBounds.exact(norm, smin)
        step = StepSpec.from_bounds(bounds, a, b)
        assert select_degree(step.alpha, step.beta, D) == want

    def test_floor_at_one(self):
        # whole interval: width^{4/3} is large, raw formula goes negative
        assert select_degree(np.pi, 0.0, 0.1) == 1


class TestBuildFilter:
    def test_whole_interval_is_identity(self, diag5):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        filt = build_filter(bounds, 1.0, 5.0, degree=12)
        assert filt.combined[0] == 1.0
        assert np.all(np.abs(filt.combined[1:]) < 1e-13)
        x = np.linspace(-1.0, 1.0, 101)
        assert np.allclose(evaluate_scalar(filt, x), 1.0, atol=1e-12)

    def test_degree_resolution_matches_hand_map(self):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        filt = build_filter(bounds, 1.5, 3.5, D=2.0)
        # recompute the angles from the affine map by hand
        lo, hi = 1.0, 25.0
        alpha = np.arccos((2 * 1.5 ** 2 - hi - lo) / (hi - lo))
        beta = np.arccos((2 * 3.5 ** 2 - hi - lo) / (hi - lo))
        assert filt.step.alpha == pytest.approx(alpha, rel=1e-15)
        assert filt.step.beta == pytest.approx(beta, rel=1e-15)
        assert filt.degree == select_degree(alpha, beta, 2.0)
        assert len(filt.combined) == filt.degree + 1

    def test_combined_convention(self):
        filt = unit_interval_filter(-0.3, 0.5, 9)
        assert filt.fourier[0] == pytest.approx(2.0 * filt.combined[0], rel=0)
        assert filt.damping[0] == 1.0
        assert np.allclose(filt.combined[1:],
                           filt.fourier[1:] * filt.damping[1:])

    def test_degenerate_interval_rejected(self):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        with pytest.raises(ValueError):
            build_filter(bounds, 2.0, 2.0, degree=5)

    def test_outside_bounds_rejected(self):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        with pytest.raises(ValueError, match="not inside"):
            build_filter(bounds, 0.5, 3.0, degree=5)

    def test_exactly_one_degree_spec(self):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        with pytest.raises(ValueError):
            build_filter(bounds, 1.5, 3.5)
        with pytest.raises(ValueError):
            build_filter(bounds, 1.5, 3.5, degree=5, D=2.0)


class TestEvaluate:
    def test_boundedness_sampled(self):
        rng = np.random.default_rng(7)
        grid = np.linspace(-1.0, 1.0, 2001)
        for d in (2, 5, 17, 137):
            lo, hi = np.sort(rng.uniform(-1.0, 1.0, size=2))
            if hi - lo < 1e-3:
                hi = min(1.0, lo + 0.1)
            filt = unit_interval_filter(lo, hi, d)
            vals = evaluate_scalar(filt, grid)
            assert vals.min() >= -1e-12
            assert vals.max() <= 1.0 + 1e-12

    def test_dominance_fig_setup(self):
        # interval [-0.3, 0.5] taken directly on [-1, 1]
        for d in (10, 100, 1000):
            filt = unit_interval_filter(-0.3, 0.5, d)
            x = 0.1
            theta = np.arccos(x)
            err = abs(evaluate_scalar(filt, x) - 1.0)
            assert err <= pointwise_error_bound(filt.step, d, theta)

    def test_far_outside_point(self):
        d = 1000
        filt = unit_interval_filter(-0.3, 0.5, d)
        x = -0.9
        delta = abs(np.arccos(-0.9) - np.arccos(-0.3))
        bound = np.pi ** 6 / (2.0 * 1002 ** 3 * delta ** 4)
        assert abs(evaluate_scalar(filt, x)) <= bound

    def test_outside_domain_warns(self):
        filt = unit_interval_filter(-0.3, 0.5, 8)
        with pytest.warns(OutsideDomainWarning):
            evaluate_scalar(filt, 1.5)

    def test_target_step_endpoints(self):
        step = StepSpec.from_unit_interval(-0.3, 0.5)
        assert target_step(step, -0.3) == 0.5
        assert target_step(step, 0.5) == 0.5
        assert target_step(step, 0.0) == 1.0
        assert target_step(step, -0.9) == 0.0


class TestErrorBounds:
    def test_direct_substitution(self):
        step = StepSpec.from_unit_interval(-0.5, 0.5)
        got = pointwise_error_bound(step, 98, theta=step.alpha - 0.5)
        assert got == pytest.approx(np.pi ** 6 / (2e6 * 0.0625), rel=1e-12)

    def test_doubling_divides_by_eight(self):
        step = StepSpec.from_unit_interval(-0.5, 0.5)
        theta = 2.5
        for d in (10, 37, 200):
            b1 = pointwise_error_bound(step, d, theta)
            b2 = pointwise_error_bound(step, 2 * (d + 2) - 2, theta)
            assert b2 / b1 == pytest.approx(0.125, rel=1e-13)

    def test_cubic_decay_bracket(self):
        filt_err = []
        x = 0.1
        ds = [50, 102, 206, 414, 830]  # each next is 2(d+2)-2
        step = StepSpec.from_unit_interval(-0.3, 0.5)
        for d in ds:
            filt = unit_interval_filter(-0.3, 0.5, d)
            filt_err.append(abs(evaluate_scalar(filt, x) - target_step(step, x)))
        for e0, e1 in zip(filt_err, filt_err[1:]):
            if e0 < 0.1:
                assert 1.0 / 32.0 <= e1 / e0 <= 1.0

    def test_endpoint_formulas(self):
        step = StepSpec.from_unit_interval(-0.3, 0.5)
        lead = np.pi ** 6 / (2.0 * 52 ** 3)
        width = step.alpha - step.beta
        at_alpha = pointwise_error_bound(step, 50, step.alpha)
        assert at_alpha == pytest.approx(
            lead * max((2 * np.pi - 2 * step.alpha) ** -4, width ** -4), rel=1e-13)
        at_beta = pointwise_error_bound(step, 50, step.beta)
        assert at_beta == pytest.approx(
            lead * max((2 * step.beta) ** -4, width ** -4), rel=1e-13)

    def test_theta_domain(self):
        step = StepSpec.from_unit_interval(-0.3, 0.5)
        with pytest.raises(ValueError):
            pointwise_error_bound(step, 10, -0.1)
        with pytest.raises(ValueError):
            pointwise_error_bound(step, 1, 1.0)

    def test_projector_bound_and_threshold(self):
        for delta in (0.05, 0.2, 0.9):
            d = degree_for_projector_gap(delta)
            assert projector_error_bound(d, delta) < 0.25
            if d > 1:
                assert projector_error_bound(d - 1, delta) >= 0.25
        with pytest.raises(ValueError):
            projector_error_bound(10, 0.0)


class TestApplyFilter:
    def test_whole_interval_identity(self, diag5):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        filt = build_filter(bounds, 1.0, 5.0, degree=9)
        X = np.eye(5)[:, :3]
        assert np.allclose(apply_filter(diag5, filt, X), X, atol=1e-12)

    def test_diagonal_matches_scalar(self, diag5):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        for d in (3, 17, 64):
            filt = build_filter(bounds, 1.5, 3.5, degree=d)
            P = apply_filter(diag5, filt, np.eye(5))
            sigmas = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
            expected = evaluate_scalar(filt, bounds.map_gram(sigmas ** 2))
            assert np.allclose(np.diag(P), expected, atol=1e-12)
            off = P - np.diag(np.diag(P))
            assert np.max(np.abs(off)) < 1e-12

    def test_assembled_projector_eigenvalues(self):
        A = random_sparse(50, 30, 0.3, seed=2)
        s = np.linalg.svd(A.to_dense(), compute_uv=False)
        bounds = SpectrumBounds.exact(float(s[0]), float(s[-1]))
        a, b = float(0.6 * s[0]), float(0.9 * s[0])
        filt = build_filter(bounds, a, b, degree=40)
        P = apply_filter(A, filt, np.eye(30))
        ev = np.sort(np.linalg.eigvalsh(0.5 * (P + P.T)))
        expected = np.sort(np.asarray(
            evaluate_scalar(filt, bounds.map_gram(s ** 2))))
        assert np.max(np.abs(ev - expected)) <= 1e-9

    def test_mv_cost_exactly_2dp(self, diag5):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        filt = build_filter(bounds, 1.5, 3.5, degree=23)
        before = diag5.mv_count
        apply_filter(diag5, filt, np.ones((5, 4)))
        assert diag5.mv_count - before == 2 * 23 * 4

    def test_unit_filter_cannot_touch_matrices(self, diag5):
        filt = unit_interval_filter(-0.3, 0.5, 5)
        with pytest.raises(ValueError, match="bounds"):
            apply_filter(diag5, filt, np.eye(5))

    def test_dimension_mismatch(self, diag5):
        bounds = SpectrumBounds.exact(5.0, 1.0)
        filt = build_filter(bounds, 1.5, 3.5, degree=5)
        with pytest.raises(ValueError):
            apply_filter(diag5, filt, np.ones((4, 2)))

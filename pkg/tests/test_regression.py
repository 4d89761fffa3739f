import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wristkin import (
    DataPoint,
    DegenerateDataError,
    PoleError,
    RationalQuadricSurface,
    fit_report,
    linear_regression,
    load_surface,
    reference_surface,
    save_surface,
    spearman_rho,
    standardized_residuals,
)


def make_points(x, y, z, w=None):
    w = np.ones_like(np.asarray(z, dtype=float)) if w is None else w
    return [DataPoint(*t) for t in zip(x, y, z, w)]


class TestSurfaceEvaluate:
    def test_constant_surface(self):
        s = RationalQuadricSurface([5.0, 0, 0, 0, 0, 0], [0.0] * 5)
        assert s.evaluate(0.3, -0.7) == 5.0
        assert np.allclose(s.evaluate(np.linspace(-1, 1, 7), np.zeros(7)), 5.0)

    def test_simple_ratio(self):
        # numerator 1, denominator 1 + x at (1, 0) -> 0.5
        s = RationalQuadricSurface([1.0, 0, 0, 0, 0, 0], [1.0, 0, 0, 0, 0])
        assert s.evaluate(1.0, 0.0) == 0.5

    def test_pole_raises(self):
        s = RationalQuadricSurface([1.0, 0, 0, 0, 0, 0], [-1.0, 0, 0, 0, 0])
        with pytest.raises(PoleError):
            s.evaluate(1.0, 0.0)

    def test_pole_free_grid(self):
        s = reference_surface()
        assert s.is_pole_free((math.radians(85), math.radians(95)),
                              (math.radians(-10), math.radians(30)))

    def test_coefficient_round_trip(self, rng):
        a = rng.uniform(-10, 10, 11)
        s = RationalQuadricSurface.from_coefficients(a)
        assert np.array_equal(s.coefficients, a)
        assert np.array_equal(s.numerator, a[0::2])
        assert np.array_equal(s.denominator, a[1::2])

    @given(st.floats(0.1, 10.0), st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_numerator_scaling(self, k, seed):
        rng = np.random.default_rng(seed)
        s = RationalQuadricSurface(rng.uniform(-2, 2, 6), rng.uniform(-0.1, 0.1, 5))
        scaled = RationalQuadricSurface(k * s.numerator, s.denominator)
        x, y = rng.uniform(-1, 1, 2)
        assert scaled.evaluate(x, y) == pytest.approx(k * s.evaluate(x, y), rel=1e-12)


class TestReferenceSurface:
    def test_anchor_at_origin_exact(self):
        assert reference_surface().evaluate(0.0, 0.0) == 18.0

    def test_published_coefficients(self):
        s = reference_surface()
        assert s.coefficients[6] == 2563.09  # a7, x^2 numerator term
        assert s.coefficients[1] == -10.60  # a2, x denominator term
        assert np.array_equal(
            s.numerator, [18.00, -290.93, -29.46, 2563.09, 37.01, -606.53]
        )
        assert np.array_equal(s.denominator, [-10.60, -2.23, 94.62, 2.12, -25.75])

    def test_json_round_trip(self, tmp_path):
        path = tmp_path / "surface.json"
        save_surface(reference_surface(), path)
        again = load_surface(path)
        assert np.array_equal(again.numerator, reference_surface().numerator)
        assert np.array_equal(again.denominator, reference_surface().denominator)


class TestFitReport:
    def test_perfect_fit(self, rng):
        s = RationalQuadricSurface(rng.uniform(-2, 2, 6), rng.uniform(-0.05, 0.05, 5))
        x, y = rng.uniform(-1, 1, (2, 30))
        z = s.evaluate(x, y)
        report = fit_report(s, make_points(x, y, z))
        assert report.sse == 0.0
        assert report.rmse == 0.0
        assert report.r_squared == 1.0
        assert report.r == 1.0
        assert np.array_equal(report.standardized_residuals, np.zeros(30))

    def test_two_point_arithmetic(self):
        # z = (1, 2), zhat = (0, 2): SSE = 1, RMSE = sqrt(0.5)
        s = RationalQuadricSurface([0.0, 0, 2.0, 0, 0, 0], [0.0] * 5)  # zhat = 2y
        pts = make_points([0.0, 0.0], [0.0, 1.0], [1.0, 2.0])
        report = fit_report(s, pts)
        assert report.sse == pytest.approx(1.0, abs=1e-15)
        assert report.rmse == pytest.approx(math.sqrt(0.5), abs=1e-12)
        assert report.n == 2

    def test_against_streaming_sum_oracle(self, rng):
        for _ in range(25):
            s = RationalQuadricSurface(rng.uniform(-3, 3, 6), rng.uniform(-0.05, 0.05, 5))
            n = int(rng.integers(5, 200))
            x, y = rng.uniform(-1, 1, (2, n))
            z = np.asarray(s.evaluate(x, y)) + rng.normal(0, 1.0, n)
            report = fit_report(s, make_points(x, y, z))
            zhat = np.asarray(s.evaluate(x, y))
            sse = math.fsum((zi - zhi) ** 2 for zi, zhi in zip(z, zhat))
            zbar = math.fsum(z) / n
            sst = math.fsum((zi - zbar) ** 2 for zi in z)
            assert abs(report.sse - sse) < 1e-10 * max(1.0, sse)
            assert abs(report.r_squared - (1.0 - sse / sst)) < 1e-10
            assert abs(report.rmse**2 * n - report.sse) < 1e-10 * max(1.0, sse)

    def test_weighted_sums(self):
        s = RationalQuadricSurface([0.0] * 6, [0.0] * 5)  # zhat = 0
        pts = make_points([0.0, 1.0], [0.0, 0.0], [1.0, 2.0], w=[2.0, 3.0])
        report = fit_report(s, pts)
        assert report.sse == pytest.approx(2.0 * 1.0 + 3.0 * 4.0)

    def test_degenerate_constant_observations(self):
        s = reference_surface()
        pts = make_points([0.0, 0.1, 0.2], [0.0, 0.0, 0.0], [3.0, 3.0, 3.0])
        with pytest.raises(DegenerateDataError):
            fit_report(s, pts)

    def test_r_squared_flag(self, rng):
        # a wildly wrong surface fits worse than the mean: raw value < 0
        s = RationalQuadricSurface([1000.0, 0, 0, 0, 0, 0], [0.0] * 5)
        x, y = rng.uniform(-1, 1, (2, 20))
        z = rng.normal(0, 1, 20)
        report = fit_report(s, make_points(x, y, z))
        assert report.r_squared < 0.0
        assert report.r_squared_out_of_range

    def test_r_squared_decreases_under_perturbation(self, rng):
        x, y = rng.uniform(-1, 1, (2, 40))
        base = RationalQuadricSurface([1.0, 2.0, -1.0, 0, 0, 0], [0.0] * 5)
        z = np.asarray(base.evaluate(x, y))
        perfect = fit_report(base, make_points(x, y, z))
        nudged = RationalQuadricSurface([1.01, 2.0, -1.0, 0, 0, 0], [0.0] * 5)
        worse = fit_report(nudged, make_points(x, y, z))
        assert perfect.r_squared == 1.0
        assert worse.r_squared < 1.0


class TestStandardizedResiduals:
    def test_two_point_hand_value(self):
        out = standardized_residuals([1.0, -1.0])
        assert np.allclose(out, [0.7071067811865475, -0.7071067811865475], atol=1e-12)

    def test_four_point_hand_value(self):
        # mean 0, sample sd sqrt(6)
        out = standardized_residuals([0.0, 3.0, -3.0, 0.0])
        expect = 3.0 / math.sqrt(6.0)
        assert np.allclose(out, [0.0, expect, -expect, 0.0], atol=1e-12)
        assert expect == pytest.approx(1.22474, abs=1e-5)

    def test_constant_residuals_degenerate(self):
        with pytest.raises(DegenerateDataError):
            standardized_residuals([2.5, 2.5, 2.5])

    def test_unit_sample_sd_when_centered(self, rng):
        eps = rng.normal(0, 3, 101)
        eps = eps - eps.mean()
        out = standardized_residuals(eps)
        assert out.std(ddof=1) == pytest.approx(1.0, abs=1e-10)


class TestSpearman:
    def test_perfect_antitone(self):
        x = np.arange(10.0)
        assert spearman_rho(x, -3.0 * x + 7.0) == -1.0

    def test_identical_series_exact_one(self, rng):
        x = rng.uniform(-5, 5, 31)
        assert spearman_rho(x, x) == 1.0

    def test_hand_rank_difference_oracle(self):
        # d = rank(x) - rank(y) = (-2, 1, 1); 1 - 6*sum(d^2)/(n(n^2-1)) = -0.5
        assert spearman_rho([1.0, 2.0, 3.0], [3.0, 1.0, 2.0]) == pytest.approx(-0.5)

    def test_ties_use_average_ranks(self):
        # x ranks: (1.5, 1.5, 3); y increasing
        rho = spearman_rho([1.0, 1.0, 2.0], [1.0, 2.0, 3.0])
        # hand Pearson of ranks (1.5,1.5,3) vs (1,2,3): cov=0.75, sx=sqrt(1.5/2)... -> 0.866
        assert rho == pytest.approx(math.sqrt(3) / 2, abs=1e-12)

    def test_constant_input_degenerate(self):
        with pytest.raises(DegenerateDataError):
            spearman_rho([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_monotone_transform_invariance(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.uniform(-5, 5, 25)
        y = rng.uniform(-5, 5, 25)
        base = spearman_rho(x, y)
        assert spearman_rho(np.exp(x / 5.0), y) == pytest.approx(base, abs=1e-12)
        assert spearman_rho(x, y**3) == pytest.approx(base, abs=1e-12)


class TestLinearRegression:
    def test_exact_line(self):
        x = np.linspace(-2, 3, 17)
        fit = linear_regression(x, 2.0 * x + 1.0)
        assert fit.slope == pytest.approx(2.0, abs=1e-12)
        assert fit.intercept == pytest.approx(1.0, abs=1e-12)
        assert fit.rho == 1.0

    def test_constant_y(self):
        x = np.linspace(0, 1, 9)
        fit = linear_regression(x, np.full(9, 4.5))
        assert fit.slope == pytest.approx(0.0, abs=1e-14)
        assert fit.intercept == pytest.approx(4.5)
        assert math.isnan(fit.rho)

    def test_known_slope_with_noise(self, rng):
        x = rng.uniform(-1, 1, 100)
        y = -0.8 * x + rng.normal(0, 0.01, 100)
        fit = linear_regression(x, y)
        assert abs(fit.slope - (-0.8)) < 0.01
        assert fit.rho < -0.99

    def test_constant_x_degenerate(self):
        with pytest.raises(DegenerateDataError):
            linear_regression([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


class TestDataPoint:
    def test_default_weight(self):
        assert DataPoint(0.0, 0.0, 1.0).w == 1.0

    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError):
            DataPoint(0.0, 0.0, 1.0, w=0.0)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            DataPoint(math.nan, 0.0, 1.0)

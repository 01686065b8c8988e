import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from renewalstream.detection import (
    DetectionConfig,
    chi_square_cdf,
    chi_square_stat,
    detect,
    normalize_rd,
    split_subdensities,
    trimmed_mean_smooth,
)
from renewalstream.errors import (
    DegenerateBinError,
    EmptyDensityError,
    InsufficientDataError,
    InvalidConfigError,
)
from renewalstream.estimation import RenewalDensityEstimate


def make_estimate(values, width=1.0, k=10):
    return RenewalDensityEstimate(
        bin_width=width, values=np.asarray(values, dtype=float), k=k,
        kind="empirical", source_rate=1.0,
    )


def chi2_cdf_quadrature(x, dof, n=200_001):
    """Numerical integration of the chi-square density, via t = u**2."""
    if x <= 0:
        return 0.0
    u = np.linspace(0.0, math.sqrt(x), n)
    log_norm = (dof / 2.0) * math.log(2.0) + math.lgamma(dof / 2.0)
    integrand = np.zeros_like(u)
    positive = u > 0
    integrand[positive] = 2.0 * np.exp(
        (dof - 1) * np.log(u[positive]) - u[positive] ** 2 / 2.0 - log_norm
    )
    if dof == 1:
        integrand[0] = 2.0 * math.exp(-log_norm)
    return float(np.trapezoid(integrand, u))


class TestNormalizeRd:
    def test_peak_becomes_ten(self):
        out = normalize_rd(make_estimate([1.0, 2.0, 5.0]))
        assert out.tolist() == [2.0, 4.0, 10.0]

    def test_constant_maps_to_constant_ten(self):
        out = normalize_rd(make_estimate([3.0, 3.0, 3.0]))
        assert out.tolist() == [10.0, 10.0, 10.0]

    @given(
        values=st.lists(
            st.floats(min_value=0, max_value=1e6), min_size=1, max_size=60
        )
    )
    def test_max_is_exactly_ten(self, values):
        if max(values) <= 0:
            return
        assert normalize_rd(make_estimate(values)).max() == 10.0

    def test_all_zero_rejected(self):
        with pytest.raises(EmptyDensityError):
            normalize_rd(make_estimate([0.0, 0.0]))


class TestSplitSubdensities:
    def test_even_split(self):
        blocks, dropped = split_subdensities(np.arange(10), 2)
        assert [b.tolist() for b in blocks] == [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]]
        assert dropped == 0

    def test_remainder_dropped_and_reported(self):
        blocks, dropped = split_subdensities(np.arange(11), 2)
        assert len(blocks) == 2 and all(b.size == 5 for b in blocks)
        assert dropped == 1

    def test_single_block_identity(self):
        blocks, dropped = split_subdensities(np.arange(7), 1)
        assert blocks[0].tolist() == list(range(7))
        assert dropped == 0

    def test_oversplit_rejected(self):
        with pytest.raises(InvalidConfigError):
            split_subdensities(np.arange(3), 4)


class TestTrimmedMeanSmooth:
    def test_constant_is_fixed_point(self):
        for half_window in (1, 2, 5):
            for trim in (0.0, 0.2, 0.35, 0.49):
                out = trimmed_mean_smooth(np.full(9, 4.2), half_window, trim)
                assert out == pytest.approx(np.full(9, 4.2))

    def test_left_edge_clips_window(self):
        out = trimmed_mean_smooth(np.asarray([0.0, 10.0, 0.0, 0.0, 0.0]), 2, 0.0)
        assert out[0] == pytest.approx(5.0)  # mean of {10, 0}

    def test_spike_trimmed_out_everywhere(self):
        # hand-enumerated: every window around the spike either trims it
        # (floor(0.25 * n) >= 1) or does not contain it, so the baseline is 1
        sub = np.asarray([1, 1, 1, 1, 9, 1, 1, 1, 1, 1], dtype=float)
        out = trimmed_mean_smooth(sub, 3, 0.25)
        assert out == pytest.approx(np.ones(10))

    def test_no_trim_keeps_spike_in_neighbors(self):
        sub = np.asarray([1, 1, 1, 1, 9, 1, 1, 1, 1, 1], dtype=float)
        out = trimmed_mean_smooth(sub, 3, 0.0)
        assert out[3] == pytest.approx((1 + 1 + 1 + 9 + 1 + 1) / 6)

    def test_too_short_rejected(self):
        with pytest.raises(InsufficientDataError):
            trimmed_mean_smooth(np.asarray([1.0]), 1, 0.2)

    @given(
        sub=st.lists(
            st.floats(min_value=0, max_value=100), min_size=2, max_size=40
        ),
        half_window=st.integers(min_value=1, max_value=25),
        trim=st.floats(min_value=0, max_value=0.49),
    )
    def test_baseline_within_window_range(self, sub, half_window, trim):
        sub = np.asarray(sub)
        out = trimmed_mean_smooth(sub, half_window, trim)
        assert np.all(out >= sub.min() - 1e-9)
        assert np.all(out <= sub.max() + 1e-9)


class TestChiSquareStat:
    def test_identical_vectors_give_zero(self):
        sub = np.asarray([1.0, 2.0, 3.0])
        assert chi_square_stat(sub, sub) == 0.0

    def test_direct_evaluation(self):
        assert chi_square_stat(np.asarray([2.0, 2.0]), np.asarray([1.0, 1.0])) == 2.0

    def test_zero_zero_bins_contribute_nothing(self):
        stat = chi_square_stat(np.asarray([0.0, 2.0]), np.asarray([0.0, 1.0]))
        assert stat == 1.0

    def test_degenerate_bin_rejected(self):
        with pytest.raises(DegenerateBinError):
            chi_square_stat(np.asarray([1.0]), np.asarray([0.0]))

    def test_matches_independent_summation(self):
        rng = np.random.default_rng(2)
        sub = rng.random(64) + 0.5
        smoothed = trimmed_mean_smooth(sub, 8, 0.2)
        expected = 0.0
        for o, e in zip(sub.tolist(), smoothed.tolist()):
            expected += (o - e) ** 2 / e
        assert chi_square_stat(sub, smoothed) == pytest.approx(expected, rel=1e-12)

    @given(
        sub=st.lists(
            st.floats(min_value=0, max_value=50), min_size=2, max_size=30
        )
    )
    def test_nonnegative(self, sub):
        sub = np.asarray(sub)
        baseline = np.full_like(sub, 1.0)
        assert chi_square_stat(sub, baseline) >= 0.0


class TestChiSquareCdf:
    def test_zero_statistic(self):
        for dof in (1, 5, 32):
            assert chi_square_cdf(0.0, dof) == 0.0

    def test_limit_is_one(self):
        assert chi_square_cdf(1e6, 3) == pytest.approx(1.0)

    def test_textbook_95th_percentile(self):
        assert chi_square_cdf(3.84, 1) == pytest.approx(0.95, abs=1e-3)

    def test_negative_rejected(self):
        with pytest.raises(InvalidConfigError):
            chi_square_cdf(-0.1, 3)

    def test_matches_quadrature_oracle_at_twenty_points(self):
        points = [
            (0.1, 1), (0.5, 1), (3.84, 1), (9.0, 1),
            (0.8, 2), (5.99, 2), (1.2, 3), (7.81, 3),
            (2.0, 5), (11.07, 5), (4.0, 9), (16.9, 9),
            (10.0, 16), (26.3, 16), (20.0, 32), (46.19, 32),
            (50.0, 64), (83.7, 64), (90.0, 100), (124.3, 100),
        ]
        assert len(points) == 20
        for x, dof in points:
            expected = chi2_cdf_quadrature(x, dof)
            assert chi_square_cdf(x, dof) == pytest.approx(expected, abs=1e-3)

    def test_monotone_in_statistic(self):
        grid = np.linspace(0, 60, 200)
        values = [chi_square_cdf(x, 12) for x in grid]
        assert np.all(np.diff(values) >= 0)


class TestDetect:
    def test_constant_density_never_flags(self):
        report = detect(make_estimate(np.full(64, 3.0)), DetectionConfig(n_sub=4))
        assert all(s.chi2 == 0.0 and s.p == 0.0 and not s.flag for s in report.subs)
        assert not report.detected

    def test_scale_invariance_exact_for_powers_of_two(self):
        rng = np.random.default_rng(8)
        values = rng.random(128) + 0.2
        base = detect(make_estimate(values), DetectionConfig(n_sub=4))
        scaled = detect(make_estimate(values * 4.0), DetectionConfig(n_sub=4))
        assert [s.chi2 for s in base.subs] == [s.chi2 for s in scaled.subs]
        assert [s.flag for s in base.subs] == [s.flag for s in scaled.subs]

    def test_scale_invariance_to_tolerance_for_odd_scales(self):
        rng = np.random.default_rng(9)
        values = rng.random(128) + 0.2
        base = detect(make_estimate(values), DetectionConfig(n_sub=4))
        scaled = detect(make_estimate(values * 3.7), DetectionConfig(n_sub=4))
        for a, b in zip(base.subs, scaled.subs):
            assert b.chi2 == pytest.approx(a.chi2, rel=1e-9)
            assert b.flag == a.flag
        assert scaled.detected == base.detected

    def test_spike_increases_sub_chi2(self):
        rng = np.random.default_rng(10)
        for seed in range(20):
            values = np.random.default_rng(seed).random(96) + 1.0
            plain = detect(make_estimate(values), DetectionConfig(n_sub=3))
            spiked = values.copy()
            spiked[10] += 50.0
            hit = detect(make_estimate(spiked), DetectionConfig(n_sub=3))
            assert hit.subs[0].chi2 > plain.subs[0].chi2

    def test_exclude_origin_bin(self):
        values = np.ones(65)
        values[0] = 100.0
        cfg = DetectionConfig(n_sub=4, exclude_origin_bin=True)
        report = detect(make_estimate(values), cfg)
        # with the origin spike removed the rest is constant: nothing to flag
        assert not report.detected
        assert all(s.chi2 == 0.0 for s in report.subs)

    def test_dof_equals_sub_density_length(self):
        values = np.random.default_rng(3).random(100) + 1.0
        report = detect(make_estimate(values), DetectionConfig(n_sub=4))
        assert report.n_bins == 25
        assert report.dropped_bins == 0
        for s in report.subs:
            assert s.p == pytest.approx(chi_square_cdf(s.chi2, 25))

    def test_report_json_schema(self):
        import json

        report = detect(make_estimate(np.full(16, 2.0)), DetectionConfig(n_sub=2))
        data = json.loads(report.to_json())
        assert set(data) == {"n_sub", "n_bins", "p_fa", "subs", "detected"}
        assert set(data["subs"][0]) == {"index", "chi2", "p", "flag"}

    def test_invalid_configs_rejected(self):
        est = make_estimate(np.ones(16))
        with pytest.raises(InvalidConfigError):
            detect(est, DetectionConfig(n_sub=0))
        with pytest.raises(InvalidConfigError):
            detect(est, DetectionConfig(trim_fraction=0.5))
        with pytest.raises(InvalidConfigError):
            detect(est, DetectionConfig(p_fa=0.0))

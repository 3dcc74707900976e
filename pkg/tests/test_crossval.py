"""RMS scoring, leave-one-out cross-validation, parameter optimization,
summary statistics, and the method comparison driver."""

import numpy as np
import pytest

from roadnet import (
    GeoCoord,
    InputError,
    Method,
    MethodParams,
    NeighborPolicy,
    build_samples,
    compare_methods,
    loocv,
    optimize_parameter,
    rms,
    summary_stats,
)

from helpers import (
    gp_field,
    make_stations,
    naive_loocv_errors,
    obs_from_values,
    random_coords,
    two_point_obs,
)


@pytest.fixture(scope="module")
def smooth_case():
    stations, obs = gp_field(0, n=25)
    return stations, obs


class TestRms:
    def test_zero(self):
        assert rms([0.0, 0.0, 0.0]) == 0.0

    def test_hand_value(self):
        # sqrt((9 + 16) / 2) = sqrt(12.5)
        assert rms([3.0, -4.0]) == pytest.approx(3.5355339059327376, rel=1e-15)

    def test_sign_insensitive(self):
        assert rms([1.0, -2.0, 3.0]) == rms([-1.0, 2.0, -3.0])

    def test_empty_rejected(self):
        with pytest.raises(InputError, match="empty"):
            rms([])


class TestBuildSamples:
    def test_sorted_by_station_id(self):
        rng = np.random.default_rng(0)
        stations = make_stations(random_coords(rng, 4))
        obs = obs_from_values(stations, [4.0, 3.0, 2.0, 1.0])
        samples = build_samples(obs, stations)
        assert [s.station_id for s in samples] == sorted(s.station_id for s in stations)

    def test_unknown_station_rejected(self):
        rng = np.random.default_rng(1)
        stations = make_stations(random_coords(rng, 3))
        obs = obs_from_values(stations, [1.0, 2.0, 3.0])
        with pytest.raises(InputError, match="s0002"):
            build_samples(obs, stations[:2])


class TestLoocv:
    def test_constant_field_scores_zero(self):
        rng = np.random.default_rng(2)
        stations = make_stations(random_coords(rng, 8))
        obs = obs_from_values(stations, [5.5] * 8)
        for method in Method:
            report = loocv(method, obs, stations, MethodParams())
            assert report.rms == pytest.approx(0.0, abs=1e-9)

    def test_matches_naive_reimplementation(self, smooth_case):
        stations, obs = smooth_case
        params = MethodParams()
        for method in Method:
            report = loocv(method, obs, stations, params)
            ids, errors = naive_loocv_errors(method, obs, stations, params)
            assert [r.station_id for r in report.rows] == ids
            assert np.array_equal(np.array([r.error for r in report.rows]), errors)

    def test_error_sign_convention(self, smooth_case):
        stations, obs = smooth_case
        report = loocv(Method.IDW, obs, stations, MethodParams())
        for row in report.rows:
            assert row.error == row.predicted - row.observed

    def test_reading_order_irrelevant(self):
        rng = np.random.default_rng(3)
        stations = make_stations(random_coords(rng, 7))
        values = list(rng.normal(5.0, 2.0, 7))
        obs_fwd = obs_from_values(stations, values)
        obs_rev = obs_from_values(stations[::-1], values[::-1])
        fwd = loocv(Method.IDW, obs_fwd, stations, MethodParams())
        rev = loocv(Method.IDW, obs_rev, stations, MethodParams())
        assert fwd.rows == rev.rows

    def test_needs_min_plus_one(self):
        rng = np.random.default_rng(4)
        stations = make_stations(random_coords(rng, 3))
        obs = obs_from_values(stations, [1.0, 2.0, 3.0])
        with pytest.raises(InputError, match=">= 4"):
            loocv(Method.IDW, obs, stations, MethodParams())
        loocv(
            Method.IDW,
            obs,
            stations,
            MethodParams(neighbor_policy=NeighborPolicy(2, 6)),
        )

    def test_report_carries_context(self, smooth_case):
        stations, obs = smooth_case
        params = MethodParams(idw_power=1.5)
        report = loocv(Method.IDW, obs, stations, params)
        assert report.method is Method.IDW
        assert report.variable is obs.variable
        assert report.timestamp == obs.timestamp
        assert report.params.idw_power == 1.5
        assert report.rms == pytest.approx(rms([r.error for r in report.rows]), rel=1e-15)


class TestOptimizeParameter:
    def test_beats_every_grid_candidate(self, smooth_case):
        stations, obs = smooth_case
        tuned = optimize_parameter(Method.IDW, obs, stations, (0.5, 4.0))
        best_rms = loocv(Method.IDW, obs, stations, tuned).rms
        for p in np.linspace(0.5, 4.0, 15):
            candidate = loocv(
                Method.IDW, obs, stations, MethodParams(idw_power=float(p))
            ).rms
            assert best_rms <= candidate + 1e-12
        assert 0.5 <= tuned.idw_power <= 4.0

    def test_tie_goes_to_smallest_parameter(self):
        # a power-of-two constant keeps the weighted mean exact, so every
        # power ties at rms exactly 0
        rng = np.random.default_rng(5)
        stations = make_stations(random_coords(rng, 6))
        obs = obs_from_values(stations, [2.0] * 6)
        tuned = optimize_parameter(Method.IDW, obs, stations, (0.5, 4.0))
        assert tuned.idw_power == 0.5

    def test_rbf_searches_log_space(self, smooth_case):
        stations, obs = smooth_case
        tuned = optimize_parameter(Method.RBF, obs, stations, (1e-3, 10.0))
        assert 1e-3 <= tuned.rbf_sigma <= 10.0
        best_rms = loocv(Method.RBF, obs, stations, tuned).rms
        for sig in np.geomspace(1e-3, 10.0, 15):
            candidate = loocv(
                Method.RBF, obs, stations, MethodParams(rbf_sigma=float(sig))
            ).rms
            assert best_rms <= candidate + 1e-12

    def test_ok_has_no_parameter(self, smooth_case):
        stations, obs = smooth_case
        with pytest.raises(InputError, match="no tunable parameter"):
            optimize_parameter(Method.OK, obs, stations, (0.5, 4.0))

    def test_search_interval_validated(self, smooth_case):
        stations, obs = smooth_case
        with pytest.raises(InputError):
            optimize_parameter(Method.IDW, obs, stations, (2.0, 1.0))
        with pytest.raises(InputError):
            optimize_parameter(Method.IDW, obs, stations, (0.0, 1.0))

    def test_preserves_other_params(self, smooth_case):
        stations, obs = smooth_case
        base = MethodParams(rbf_sigma=0.123, neighbor_policy=NeighborPolicy(4, 5))
        tuned = optimize_parameter(Method.IDW, obs, stations, (0.5, 4.0), base)
        assert tuned.rbf_sigma == 0.123
        assert tuned.neighbor_policy == NeighborPolicy(4, 5)


class TestSummaryStats:
    def test_two_point_construction(self):
        # engineered sample with mean 4.912 and sample std 6.419
        obs = two_point_obs(4.912, 6.419)
        stats = summary_stats(obs)
        assert stats.mean == pytest.approx(4.912, rel=1e-12)
        assert stats.std_dev == pytest.approx(6.419, rel=1e-12)
        assert stats.cv_percent == pytest.approx(100.0 * 6.419 / 4.912, rel=1e-12)

    def test_cv_undefined_for_non_positive_mean(self):
        assert summary_stats(two_point_obs(-1.921, 1.0)).cv_percent is None
        assert summary_stats(two_point_obs(0.0, 1.0)).cv_percent is None

    def test_needs_two_readings(self):
        rng = np.random.default_rng(6)
        stations = make_stations(random_coords(rng, 1))
        obs = obs_from_values(stations, [1.0])
        with pytest.raises(InputError, match=">= 2"):
            summary_stats(obs)

    def test_reading_order_irrelevant(self):
        rng = np.random.default_rng(7)
        stations = make_stations(random_coords(rng, 5))
        values = [3.0, 1.0, 4.0, 1.5, 9.0]
        fwd = summary_stats(obs_from_values(stations, values))
        rev = summary_stats(obs_from_values(stations[::-1], values[::-1]))
        assert fwd == rev


class TestCompareMethods:
    def test_single_cell_matches_loocv(self, smooth_case):
        stations, obs = smooth_case
        (report,) = compare_methods([obs], stations, methods=(Method.OK,))
        direct = loocv(Method.OK, obs, stations, MethodParams())
        assert report.rows == direct.rows
        assert report.rms == direct.rms

    def test_grid_shape_and_tuning(self, smooth_case):
        stations, obs = smooth_case
        reports = compare_methods([obs], stations)
        assert [r.method for r in reports] == [Method.IDW, Method.RBF, Method.OK]
        tuned = optimize_parameter(Method.IDW, obs, stations, (0.5, 4.0))
        assert reports[0].params.idw_power == tuned.idw_power

    def test_empty_rejected(self, smooth_case):
        stations, _ = smooth_case
        with pytest.raises(InputError):
            compare_methods([], stations)

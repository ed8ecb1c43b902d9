import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from oracles import chi2_2_sf_series
from qardl import _tables
from qardl.diagnostics import (
    adf_test,
    default_adf_max_lag,
    default_pp_bandwidth,
    describe,
    jarque_bera,
    pp_test,
    unit_root_table_row,
)
from qardl.errors import DataError
from qardl.series import ObservationSeries


def unit_root_series():
    # same construction as tests/fixtures/make_fixtures.py
    rng = np.random.default_rng(11)
    return np.cumsum(rng.standard_normal(300)), rng.standard_normal(300)


def ar_difference_series():
    rng = np.random.default_rng(12)
    e = rng.standard_normal(400)
    d = np.zeros(400)
    for t in range(2, 400):
        d[t] = 0.6 * d[t - 1] - 0.3 * d[t - 2] + e[t]
    return np.cumsum(d)


def as_series(x, name="X"):
    return ObservationSeries(name, np.datetime64("2020-01-01") + np.arange(len(x)), x)


class TestDescribe:
    def test_symmetric_series_has_zero_skew(self):
        d = describe(np.tile([-1.0, 0.0, 1.0], 10))
        assert d.skewness == 0.0
        assert d.mean == 0.0

    def test_against_scipy(self):
        rng = np.random.default_rng(1)
        x = rng.gamma(2.0, size=500)
        d = describe(as_series(x, "G"))
        assert d.name == "G" and d.n == 500
        assert d.skewness == pytest.approx(stats.skew(x), rel=1e-12)
        assert d.excess_kurtosis == pytest.approx(stats.kurtosis(x, fisher=True), rel=1e-12)
        assert d.std_dev == pytest.approx(np.std(x, ddof=1), rel=1e-12)
        assert (d.minimum, d.maximum) == (x.min(), x.max())

    def test_large_normal_sample(self):
        # scipy.stats on the same draw: skew -0.017213..., excess kurtosis 0.019864...
        z = np.random.default_rng(2024).standard_normal(10_000)
        d = describe(z)
        assert d.skewness == pytest.approx(-0.01721336069462414, abs=1e-12)
        assert d.excess_kurtosis == pytest.approx(0.01986409853518145, abs=1e-12)
        assert abs(d.skewness) < 0.08 and abs(d.excess_kurtosis) < 0.15

    def test_errors(self):
        with pytest.raises(DataError):
            describe([1.0, 2.0, 3.0])
        with pytest.raises(DataError, match="zero variance"):
            describe([2.0] * 10)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=5, max_size=60), st.randoms())
    def test_permutation_invariant(self, xs, rnd):
        x = np.array(xs)
        if np.ptp(x) < 1e-6:
            return
        shuffled = x.copy()
        rnd.shuffle(shuffled)
        a, b = describe(x), describe(shuffled)
        assert (a.mean, a.skewness, a.excess_kurtosis, a.jarque_bera) == (
            b.mean, b.skewness, b.excess_kurtosis, b.jarque_bera)


class TestJarqueBera:
    def test_closed_forms(self):
        assert jarque_bera(0.0, 0.0, 50) == (0.0, 1.0)
        assert jarque_bera(1.0, 0.0, 6)[0] == 1.0

    @pytest.mark.parametrize("x", [0.5, 3.0, 10.0, 40.0])
    def test_p_value_series_oracle(self, x):
        # S=0 and K chosen so that JB = x at n=6
        k = math.sqrt(4 * x)
        jb, p = jarque_bera(0.0, k, 6)
        assert jb == pytest.approx(x, rel=1e-14)
        assert p == pytest.approx(chi2_2_sf_series(x), rel=1e-10, abs=1e-300)

    def test_stars(self):
        assert describe(np.random.default_rng(3).exponential(size=400)).jb_stars == "***"

    def test_kurtosis_convention(self):
        # US summary-table rows (S, K, JB): the sample spans about 300 to 345
        # trading days, which only the excess-kurtosis reading reproduces
        rows = [(-1.2664, 2.2342, 152.0261), (-0.1385, -0.6899, 6.9764), (-0.5350, -0.0800, 15.1719),
                (-0.3534, -1.0902, 21.8000), (0.3851, -1.3020, 29.6462), (-4.0816, 32.9603, 15292.9583)]
        n_excess = [6 * jb / jarque_bera(s, k, 6)[0] for s, k, jb in rows]
        n_raw = [6 * jb / jarque_bera(s, k - 3.0, 6)[0] for s, k, jb in rows]
        assert all(290 <= n <= 345 for n in n_excess)
        assert max(n_excess) - min(n_excess) < 20
        assert not all(290 <= n <= 345 for n in n_raw)
        assert max(n_raw) - min(n_raw) > 400


class TestAdf:
    @pytest.mark.parametrize(
        "make, det, stat, pval, lag, nobs",
        [
            # statsmodels adfuller(autolag="BIC") on the same series
            ("rw", "constant", -1.9532833123988942, 0.30742462948195226, 0, 299),
            ("rw", "constant+trend", -2.7528616319802026, 0.2147956493401601, 0, 299),
            ("ar", "constant", -1.8261509260776598, 0.3675579327804538, 2, 397),
            ("ar", "constant+trend", -2.742070422364436, 0.21903294386620664, 2, 397),
        ],
    )
    def test_reference_values(self, make, det, stat, pval, lag, nobs):
        y = unit_root_series()[0] if make == "rw" else ar_difference_series()
        r = adf_test(y, det)
        assert r.statistic == pytest.approx(stat, abs=1e-9)
        assert r.p_value == pytest.approx(pval, abs=1e-9)
        assert (r.lag_or_bandwidth, r.nobs) == (lag, nobs)

    def test_fixed_lag_and_aic(self):
        y = ar_difference_series()
        assert adf_test(y, lag_selection="fixed", max_lag=4).lag_or_bandwidth == 4
        assert adf_test(y, lag_selection="aic").lag_or_bandwidth >= 2

    def test_white_noise_rejects(self):
        r = adf_test(unit_root_series()[1])
        assert r.reject_at == "1%" and r.stars == "***"

    def test_differenced_walk_rejects_at_1pct(self):
        assert adf_test(np.diff(unit_root_series()[0])).reject_at == "1%"

    def test_errors(self):
        with pytest.raises(DataError):
            adf_test(np.arange(12.0))
        with pytest.raises(ValueError):
            adf_test(unit_root_series()[0], "quadratic")
        with pytest.raises(ValueError):
            adf_test(unit_root_series()[0], lag_selection="hqic")

    def test_default_lag_rules(self):
        assert default_adf_max_lag(100) == 12
        assert default_adf_max_lag(300) == 15
        assert default_pp_bandwidth(100) == 4
        assert default_pp_bandwidth(500) == 5


class TestPp:
    @pytest.mark.parametrize(
        "det, z_rho, z_t",
        [
            # arch.unitroot.PhillipsPerron(lags=5) on the same series
            ("constant", -8.523877766850186, -2.0696423831405544),
            ("constant+trend", -17.34129009202722, -2.96413107683528),
        ],
    )
    def test_reference_values(self, det, z_rho, z_t):
        r = pp_test(unit_root_series()[0], det, bandwidth=5)
        assert r.statistic == pytest.approx(z_rho, abs=1e-9)
        assert r.extra["z_t"] == pytest.approx(z_t, abs=1e-9)
        assert r.lag_or_bandwidth == 5
        assert r.reject_at is None

    def test_white_noise_is_of_order_minus_n(self):
        r = pp_test(unit_root_series()[1], "constant", bandwidth=5)
        assert r.statistic == pytest.approx(-278.63030444549634, abs=1e-8)
        assert -1.3 * 300 < r.statistic < -0.6 * 300
        assert r.reject_at == "1%"

    def test_errors(self):
        with pytest.raises(DataError):
            pp_test(np.arange(15.0))
        with pytest.raises(ValueError):
            pp_test(unit_root_series()[0], bandwidth=-1)


class TestTables:
    def test_asymptotic_tau_values(self):
        cv = _tables.tau_critical_values("c", 1e12)
        assert cv["5%"] == pytest.approx(-2.86154, abs=1e-5)
        assert cv["1%"] == pytest.approx(-3.43035, abs=1e-5)
        assert _tables.tau_critical_values("ct", 1e12)["5%"] == pytest.approx(-3.41049, abs=1e-5)

    def test_tau_pvalue_at_critical_value(self):
        for trend in ("c", "ct"):
            cv = _tables.tau_critical_values(trend, 1e12)
            assert _tables.tau_pvalue(cv["5%"], trend) == pytest.approx(0.05, abs=0.002)

    def test_z_rho_table(self):
        assert _tables.z_rho_critical_values("c", 100)["5%"] == pytest.approx(-13.7)
        cv = _tables.z_rho_critical_values("c", 300)
        assert -14.1 < cv["5%"] < -13.7
        assert _tables.z_rho_pvalue(cv["5%"], "c") == pytest.approx(0.05, abs=0.005)

    def test_pvalues_monotone(self):
        xs = np.linspace(-30, 2, 60)
        for trend in ("c", "ct"):
            p = [_tables.tau_pvalue(x, trend) for x in xs]
            assert np.all(np.diff(p) >= 0) and 0 <= p[0] and p[-1] <= 1


class TestTableRow:
    def test_random_walk_pattern(self):
        rw = as_series(np.cumsum(np.random.default_rng(21).standard_normal(500)))
        row = unit_root_table_row(rw)
        assert row["ADF(level)"].stars == "" and row["PP(level)"].stars == ""
        assert row["ADF(diff)"].stars == "***" and row["PP(diff)"].stars == "***"

    def test_white_noise_pattern(self):
        wn = as_series(np.random.default_rng(22).standard_normal(500))
        row = unit_root_table_row(wn)
        assert all(r.stars for r in row.values())

"""
Descriptive statistics and unit-root tests.

``describe`` reproduces the column set of a logged-levels summary table
(min, max, mean, sample standard deviation, skewness, excess kurtosis and
Jarque-Bera).  ``adf_test`` and ``pp_test`` are left-tailed tests of a unit
root against stationarity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import _tables
from .errors import DataError, EstimationError
from .estimates import significance_stars
from .regression import ols_fit
from .series import ObservationSeries, first_difference

__all__ = [
    "DescriptiveStats",
    "UnitRootResult",
    "describe",
    "jarque_bera",
    "adf_test",
    "pp_test",
    "default_adf_max_lag",
    "default_pp_bandwidth",
]

DETERMINISTIC = {"none": "n", "constant": "c", "constant+trend": "ct"}


@dataclass(frozen=True)
class DescriptiveStats:
    """Sample moments of one series.

    ``excess_kurtosis`` is ``m4 / m2**2 - 3`` (zero for a normal sample).
    """

    name: str
    n: int
    minimum: float
    maximum: float
    mean: float
    std_dev: float
    skewness: float
    excess_kurtosis: float
    jarque_bera: float
    jb_p_value: float

    @property
    def jb_stars(self) -> str:
        return significance_stars(self.jb_p_value)


def _values(s) -> np.ndarray:
    if isinstance(s, ObservationSeries):
        return s.values
    return np.asarray(s, dtype=float).reshape(-1)


def describe(s) -> DescriptiveStats:
    """Moments of a series; accepts an ObservationSeries or a 1-d array.

    All sums use ``math.fsum`` so the result does not depend on the order
    of the observations.
    """
    x = _values(s)
    name = s.name if isinstance(s, ObservationSeries) else ""
    n = x.size
    if n < 4:
        raise DataError(f"describe needs at least 4 observations, got {n}")
    mean = math.fsum(x) / n
    d = x - mean
    m2 = math.fsum(d * d) / n
    if m2 <= 0.0:
        raise DataError(f"series {name!r} has zero variance; skewness and kurtosis undefined")
    m3 = math.fsum(d * d * d) / n
    m4 = math.fsum(d * d * d * d) / n
    skew = m3 / m2**1.5
    exkurt = m4 / m2**2 - 3.0
    jb, p = jarque_bera(skew, exkurt, n)
    return DescriptiveStats(
        name=name,
        n=n,
        minimum=float(x.min()),
        maximum=float(x.max()),
        mean=mean,
        std_dev=math.sqrt(m2 * n / (n - 1)),
        skewness=skew,
        excess_kurtosis=exkurt,
        jarque_bera=jb,
        jb_p_value=p,
    )


def jarque_bera(skewness: float, excess_kurtosis: float, n: int) -> tuple[float, float]:
    """``n/6 * (S^2 + K^2/4)`` with its chi-squared(2) survival probability."""
    if n < 4:
        raise DataError(f"Jarque-Bera needs n >= 4, got {n}")
    jb = n / 6.0 * (skewness**2 + excess_kurtosis**2 / 4.0)
    return float(jb), float(stats.chi2.sf(jb, 2))


@dataclass(frozen=True)
class UnitRootResult:
    test: str
    statistic: float
    lag_or_bandwidth: int
    deterministic: str
    critical_values: dict
    p_value: float
    nobs: int
    extra: dict = field(default_factory=dict)

    @property
    def reject_at(self) -> str | None:
        """Smallest tabulated level at which the unit root is rejected."""
        for level in _tables.LEVELS:
            if self.statistic < self.critical_values[level]:
                return level
        return None

    @property
    def stars(self) -> str:
        return {"1%": "***", "5%": "**", "10%": "*", None: ""}[self.reject_at]


def _code(deterministic: str) -> str:
    try:
        return DETERMINISTIC[deterministic]
    except KeyError:
        raise ValueError(
            f"deterministic must be one of {sorted(DETERMINISTIC)}, got {deterministic!r}"
        ) from None


def _deterministic_columns(code: str, m: int) -> list[np.ndarray]:
    cols = []
    if code in ("c", "ct"):
        cols.append(np.ones(m))
    if code == "ct":
        cols.append(np.arange(1.0, m + 1.0))
    return cols


def default_adf_max_lag(n: int) -> int:
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def default_pp_bandwidth(n: int) -> int:
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def _adf_design(y, lags, code, start):
    """ADF regression on observations ``start..n-1`` of the differenced series."""
    dy = np.diff(y)
    t = np.arange(start, dy.size)
    cols = [y[t]]  # lagged level y_{t-1} aligned with dy[t]
    for j in range(1, lags + 1):
        cols.append(dy[t - j])
    cols = cols[:1] + _deterministic_columns(code, t.size) + cols[1:]
    return np.column_stack(cols), dy[t]


def adf_test(
    s,
    deterministic: str = "constant",
    max_lag: int | None = None,
    lag_selection: str = "bic",
) -> UnitRootResult:
    """Augmented Dickey-Fuller t test.

    The lag order is chosen by AIC or BIC over ``0..max_lag`` on a common
    sample, then the chosen regression is re-estimated on all available
    observations.  ``lag_selection="fixed"`` uses ``max_lag`` directly.
    """
    y = _values(s)
    n = y.size
    code = _code(deterministic)
    if max_lag is None:
        max_lag = default_adf_max_lag(n)
    if n <= max_lag + 10:
        raise DataError(f"ADF needs more than max_lag + 10 = {max_lag + 10} observations")
    if lag_selection not in ("fixed", "aic", "bic"):
        raise ValueError(f"unknown lag_selection {lag_selection!r}")

    if lag_selection == "fixed":
        lags = max_lag
    else:
        best = None
        for L in range(max_lag + 1):
            X, dy = _adf_design(y, L, code, max_lag)
            fit = _ols(X, dy)
            ic = fit.aic if lag_selection == "aic" else fit.bic
            if best is None or ic < best[0]:
                best = (ic, L)
        lags = best[1]
    X, dy = _adf_design(y, lags, code, lags)
    fit = _ols(X, dy)
    stat = fit.coefficients[0] / fit.std_errors[0]
    nobs = dy.size
    return UnitRootResult(
        test="ADF",
        statistic=float(stat),
        lag_or_bandwidth=int(lags),
        deterministic=deterministic,
        critical_values=_tables.tau_critical_values(code, nobs),
        p_value=_tables.tau_pvalue(stat, code),
        nobs=nobs,
    )


def _ols(X, y):
    try:
        return ols_fit(X, y)
    except EstimationError as exc:
        raise EstimationError(f"singular unit-root regression: {exc}") from None


def _bartlett_lrv(u, bandwidth):
    n = u.size
    g0 = float(u @ u) / n
    lrv = g0
    for j in range(1, bandwidth + 1):
        gj = float(u[j:] @ u[:-j]) / n
        lrv += 2.0 * (1.0 - j / (bandwidth + 1.0)) * gj
    return g0, lrv


def pp_test(s, deterministic: str = "constant", bandwidth="automatic") -> UnitRootResult:
    """Phillips-Perron test, normalised-bias form ``Z_rho``.

    The residual long-run variance uses a Bartlett kernel with bandwidth
    ``floor(4 (n/100)^(2/9))`` unless an integer is given.  The ``Z_t``
    form, its MacKinnon critical values and p-value are returned in
    ``extra``.
    """
    y = _values(s)
    n = y.size
    code = _code(deterministic)
    if n <= 20:
        raise DataError(f"PP test needs more than 20 observations, got {n}")
    if bandwidth == "automatic":
        bw = default_pp_bandwidth(n)
    else:
        bw = int(bandwidth)
        if bw < 0:
            raise ValueError("bandwidth must be non-negative")
    m = n - 1
    X = np.column_stack([y[:-1], *_deterministic_columns(code, m)])
    fit = _ols(X, y[1:])
    rho = fit.coefficients[0]
    se_rho = fit.std_errors[0]
    u = fit.residuals
    s2 = fit.sigma2
    g0, lam2 = _bartlett_lrv(u, min(bw, m - 1))
    if not lam2 > 0:
        raise EstimationError("non-positive long-run variance in PP test")
    z_rho = m * (rho - 1.0) - 0.5 * (m**2 * se_rho**2 / s2) * (lam2 - g0)
    t_rho = (rho - 1.0) / se_rho
    z_t = math.sqrt(g0 / lam2) * t_rho - 0.5 * (lam2 - g0) / math.sqrt(lam2) * (
        m * se_rho / math.sqrt(s2)
    )
    return UnitRootResult(
        test="PP",
        statistic=float(z_rho),
        lag_or_bandwidth=bw,
        deterministic=deterministic,
        critical_values=_tables.z_rho_critical_values(code, m),
        p_value=_tables.z_rho_pvalue(z_rho, code),
        nobs=m,
        extra={
            "z_t": float(z_t),
            "z_t_critical_values": _tables.tau_critical_values(code, m),
            "z_t_p_value": _tables.tau_pvalue(z_t, code),
        },
    )


def unit_root_table_row(s: ObservationSeries, deterministic="constant") -> dict:
    """ADF and PP on levels and first differences of one series."""
    d = first_difference(s)
    return {
        "ADF(level)": adf_test(s, deterministic),
        "ADF(diff)": adf_test(d, deterministic),
        "PP(level)": pp_test(s, deterministic),
        "PP(diff)": pp_test(d, deterministic),
    }

"""
Critical values and p-value approximations for Dickey-Fuller type tests.

Single-unit-root (N = 1) rows only.  Keys follow MacKinnon's notation:
"n" no deterministic terms, "c" constant, "ct" constant and trend.
"""

import numpy as np
from scipy.stats import norm

# MacKinnon (2010) response surfaces: cv(T) = b0 + b1/T + b2/T^2 + b3/T^3
# rows are the 1%, 5% and 10% levels
TAU_2010 = {
    "n": np.array([
        [-2.56574, -2.2358, -3.627, 0.0],
        [-1.94100, -0.2686, -3.365, 31.223],
        [-1.61682, 0.2656, -2.714, 25.364],
    ]),
    "c": np.array([
        [-3.43035, -6.5393, -16.786, -79.433],
        [-2.86154, -2.8903, -4.234, -40.040],
        [-2.56677, -1.5384, -2.809, 0.0],
    ]),
    "ct": np.array([
        [-3.95877, -9.0531, -28.428, -134.155],
        [-3.41049, -4.3904, -9.036, -45.374],
        [-3.12705, -2.5856, -3.925, -22.380],
    ]),
}

# MacKinnon (1994) p-value approximations for the t statistic
TAU_STAR = {"n": -1.04, "c": -1.61, "ct": -2.89}
TAU_MIN = {"n": -19.04, "c": -18.83, "ct": -16.18}
TAU_MAX = {"n": np.inf, "c": 2.74, "ct": 0.7}
TAU_SMALLP = {
    "n": np.array([0.6344, 1.2378, 3.2496]) * [1, 1, 1e-2],
    "c": np.array([2.1659, 1.4412, 3.8269]) * [1, 1, 1e-2],
    "ct": np.array([3.2512, 1.6047, 4.9588]) * [1, 1, 1e-2],
}
TAU_LARGEP = {
    "n": np.array([0.4797, 9.3557, -0.6999, 3.3066]) * [1, 1e-1, 1e-1, 1e-2],
    "c": np.array([1.7339, 9.3202, -1.2745, -1.0368]) * [1, 1e-1, 1e-1, 1e-2],
    "ct": np.array([2.5261, 6.1654, -3.7956, -6.0285]) * [1, 1e-1, 1e-1, 1e-2],
}

# MacKinnon (1994) p-value approximations for the normalised-bias statistic;
# the small-p polynomial is in log|z|
Z_STAR = {"n": -2.9, "c": -8.9, "ct": -15.0}
Z_SMALLP = {
    "n": np.array([0.0342, -0.6376, 0.0, -0.03872]),
    "c": np.array([2.2142, -1.7863, 0.32828, -0.07727]),
    "ct": np.array([4.6476, -2.8932, 0.5832, -0.0999]),
}
Z_LARGEP = {
    "n": np.array([0.4927, 6.906, 13.2331, 12.099, 0.0]) * [1, 1e-1, 1e-2, 1e-3, 1e-5],
    "c": np.array([1.717, 5.5243, 4.3463, 1.6671, 0.0]) * [1, 1e-1, 1e-2, 1e-3, 1e-5],
    "ct": np.array([2.7117, 4.5731, 2.2868, 0.6362, 0.5]) * [1, 1e-1, 1e-2, 1e-3, 1e-5],
}

# Fuller's finite-sample critical values for T(rho - 1): 1%, 5%, 10%
Z_RHO_T = np.array([25.0, 50.0, 100.0, 250.0, 500.0, np.inf])
Z_RHO_CV = {
    "n": np.array([
        [-11.9, -7.3, -5.3],
        [-12.9, -7.7, -5.5],
        [-13.3, -7.9, -5.6],
        [-13.6, -8.0, -5.7],
        [-13.7, -8.0, -5.7],
        [-13.8, -8.1, -5.7],
    ]),
    "c": np.array([
        [-17.2, -12.5, -10.2],
        [-18.9, -13.3, -10.7],
        [-19.8, -13.7, -11.0],
        [-20.3, -14.0, -11.2],
        [-20.5, -14.0, -11.2],
        [-20.7, -14.1, -11.3],
    ]),
    "ct": np.array([
        [-22.5, -17.9, -15.6],
        [-25.7, -19.8, -16.8],
        [-27.4, -20.7, -17.5],
        [-28.4, -21.3, -18.0],
        [-28.9, -21.5, -18.1],
        [-29.5, -21.8, -18.3],
    ]),
}

LEVELS = ("1%", "5%", "10%")


def tau_critical_values(trend: str, nobs: float) -> dict:
    coef = TAU_2010[trend]
    inv = 1.0 / nobs
    vals = coef @ np.array([1.0, inv, inv**2, inv**3])
    return dict(zip(LEVELS, (float(v) for v in vals)))


def tau_pvalue(stat: float, trend: str) -> float:
    if stat > TAU_MAX[trend]:
        return 1.0
    if stat < TAU_MIN[trend]:
        return 0.0
    coef = TAU_SMALLP[trend] if stat <= TAU_STAR[trend] else TAU_LARGEP[trend]
    return float(norm.cdf(np.polyval(coef[::-1], stat)))


def z_rho_critical_values(trend: str, nobs: float) -> dict:
    # linear interpolation in 1/T between tabulated sample sizes
    x = 1.0 / Z_RHO_T
    xi = min(1.0 / nobs, x[0])
    order = np.argsort(x)
    table = Z_RHO_CV[trend]
    vals = [float(np.interp(xi, x[order], table[order, j])) for j in range(3)]
    return dict(zip(LEVELS, vals))


def z_rho_pvalue(stat: float, trend: str) -> float:
    if stat <= Z_STAR[trend]:
        z = np.log(abs(stat))
        coef = Z_SMALLP[trend]
    else:
        z = stat
        coef = Z_LARGEP[trend]
    return float(min(max(norm.cdf(np.polyval(coef[::-1], z)), 0.0), 1.0))

"""
Synthetic panels from a known error-correction data-generating process and
Monte-Carlo recovery studies of the ARDL and quantile ARDL estimators.

The dependent variable follows

    dOil_t = alpha + rho * (Oil_{t-1} - sum_X beta_X X_{t-1})
             + sum_i phi_i dOil_{t-i} + sum_X sum_j omega_{X,j} dX_{t-j} + u_t

so the lag-1 level coefficient of ``X`` is ``-rho * beta_X`` and
``beta_X = -level_X / rho`` recovers the long-run effect.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .ardl import fit_linear_ardl, to_ecm
from .design import SYMBOLS, ModelSpec
from .errors import ConfigError, EstimationError, QardlError
from .quantile_ardl import fit_qardl
from .series import REGRESSOR_ROLES, AlignedPanel, PanelColumn

__all__ = [
    "RegressorProcess",
    "ErrorSpec",
    "DgpSpec",
    "simulate_panel",
    "true_parameters",
    "StudyRow",
    "StudyReport",
    "run_recovery_study",
]

BURN_IN = 200
DEFAULT_NAMES = {
    "dependent": "Oil",
    "epu": "EPU",
    "sp500": "SP500",
    "csi300": "CSI300",
    "interest": "Interest",
    "panic": "Panic",
}


@dataclass(frozen=True)
class RegressorProcess:
    """Level process of one regressor.

    ``kind="random_walk"`` cumulates the innovations; ``kind="ar1"`` uses
    ``x_t = coef * x_{t-1} + e_t``.  Innovations are ``scale * N(0, 1)`` or,
    with ``innovation="uniform"``, ``scale * U(0, 1)`` (non-negative, used by
    location-scale designs).
    """

    kind: str = "random_walk"
    coef: float = 0.0
    scale: float = 1.0
    innovation: str = "gaussian"

    def __post_init__(self):
        if self.kind not in ("random_walk", "ar1"):
            raise ConfigError(f"unknown regressor process {self.kind!r}")
        if self.innovation not in ("gaussian", "uniform"):
            raise ConfigError(f"unknown innovation distribution {self.innovation!r}")
        if self.kind == "ar1" and not abs(self.coef) < 1:
            raise ConfigError("AR(1) regressor needs |coef| < 1")


@dataclass(frozen=True)
class ErrorSpec:
    """Innovation distribution of the dependent equation.

    ``kind``: ``"gaussian"`` (``scale * N(0,1)``), ``"t"`` (Student t with
    ``df`` degrees of freedom rescaled to unit variance, times ``scale``)
    or ``"location-scale"`` (``scale * (1 + slope * z_t) * N(0,1)`` where
    ``z_t`` is the innovation of regressor ``scale_role``).
    """

    kind: str = "gaussian"
    scale: float = 1.0
    df: float = 5.0
    scale_role: str | None = None
    slope: float = 0.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "t", "location-scale"):
            raise ConfigError(f"unknown error distribution {self.kind!r}")
        if self.scale < 0:
            raise ConfigError("error scale must be non-negative")
        if self.kind == "t" and not self.df > 2:
            raise ConfigError("t errors need df > 2")
        if self.kind == "location-scale" and self.scale_role not in REGRESSOR_ROLES:
            raise ConfigError("location-scale errors need a regressor scale_role")

    def quantile(self, gamma: float) -> float:
        """Quantile of the standardised innovation (before the scale factor)."""
        if self.kind == "t":
            return float(stats.t.ppf(gamma, self.df) * math.sqrt((self.df - 2) / self.df))
        return float(stats.norm.ppf(gamma))


@dataclass(frozen=True)
class DgpSpec:
    """Known data-generating process for an error-correction panel."""

    rho: float
    long_run: Mapping[str, float]
    alpha: float = 0.0
    phi: Sequence[float] = ()
    short_run: Mapping[str, Sequence[float]] = field(default_factory=dict)
    error: ErrorSpec = field(default_factory=ErrorSpec)
    regressors: Mapping[str, RegressorProcess] = field(default_factory=dict)
    names: Mapping[str, str] = field(default_factory=dict)
    n: int = 500
    seed: int = 0
    burn_in: int = BURN_IN

    def __post_init__(self):
        if not -1.0 < self.rho < 0.0:
            raise ConfigError(f"rho must lie in (-1, 0) for a stable DGP, got {self.rho!r}")
        if self.n < 100:
            raise ConfigError(f"n must be at least 100, got {self.n}")
        bad = set(self.long_run) - set(REGRESSOR_ROLES)
        bad |= set(self.short_run) - set(self.long_run)
        bad |= set(self.regressors) - set(self.long_run)
        if bad:
            raise ConfigError(f"unknown or unused roles in DGP: {sorted(bad)}")
        if self.error.kind == "location-scale":
            role = self.error.scale_role
            proc = self.process(role) if role in self.long_run else None
            if proc is None or proc.kind != "random_walk" or proc.innovation != "uniform":
                raise ConfigError(
                    "location-scale errors need scale_role to be a model regressor "
                    "following a random walk with uniform innovations"
                )
            if 1.0 + min(0.0, self.error.slope) * proc.scale <= 0:
                raise ConfigError("location-scale factor 1 + slope * z must stay positive")
        ar = self.levels_ar()
        roots = np.roots(np.r_[1.0, -ar]) if ar.size else np.array([])
        if np.any(np.abs(roots) >= 1.0):
            raise ConfigError("short-run dynamics are explosive: AR roots outside the unit circle")

    @property
    def roles(self) -> tuple[str, ...]:
        return tuple(r for r in REGRESSOR_ROLES if r in self.long_run)

    def process(self, role: str) -> RegressorProcess:
        return self.regressors.get(role, RegressorProcess())

    def name(self, role: str) -> str:
        return self.names.get(role, DEFAULT_NAMES[role])

    def levels_ar(self) -> np.ndarray:
        """Autoregressive coefficients of ``Oil_t`` on its own lags."""
        phi = list(self.phi)
        p = len(phi) + 1
        a = np.zeros(p)
        a[0] = 1.0 + self.rho + (phi[0] if phi else 0.0)
        for i in range(1, p):
            a[i] = (phi[i] if i < len(phi) else 0.0) - phi[i - 1]
        return a

    def model_spec(self) -> ModelSpec:
        """Lag orders that nest this DGP."""
        return ModelSpec(len(self.phi) + 1, {r: len(self.short_run.get(r, ())) for r in self.roles})


def simulate_panel(dgp: DgpSpec) -> AlignedPanel:
    """Draw one panel of length ``dgp.n`` after discarding ``dgp.burn_in`` steps.

    Regressor innovations are drawn first (in role order), then the
    dependent-equation errors, from ``numpy.random.default_rng(dgp.seed)``.
    """
    rng = np.random.default_rng(dgp.seed)
    roles = dgp.roles
    spec = dgp.model_spec()
    lead = max(spec.max_lag, 1) + 1
    T = dgp.n + dgp.burn_in + lead

    X = {}
    Z = {}
    for r in roles:
        proc = dgp.process(r)
        if proc.innovation == "gaussian":
            z = proc.scale * rng.standard_normal(T)
        else:
            z = proc.scale * rng.random(T)
        Z[r] = z
        if proc.kind == "random_walk":
            X[r] = np.cumsum(z)
        else:
            x = np.empty(T)
            x[0] = z[0]
            for t in range(1, T):
                x[t] = proc.coef * x[t - 1] + z[t]
            X[r] = x

    err = dgp.error
    if err.kind == "t":
        e = rng.standard_t(err.df, T) * math.sqrt((err.df - 2) / err.df)
    else:
        e = rng.standard_normal(T)
    if err.kind == "location-scale":
        u = err.scale * (1.0 + err.slope * Z[err.scale_role]) * e
    else:
        u = err.scale * e

    dX = {r: np.r_[0.0, np.diff(X[r])] for r in roles}
    beta = np.array([dgp.long_run[r] for r in roles])
    Xmat = np.column_stack([X[r] for r in roles]) if roles else np.zeros((T, 0))
    eq = Xmat @ beta
    phi = list(dgp.phi)
    omegas = [(dX[r], list(dgp.short_run.get(r, ()))) for r in roles]

    y = np.empty(T)
    dy = np.zeros(T)
    y[:lead] = eq[:lead]
    for t in range(lead, T):
        v = dgp.alpha + dgp.rho * (y[t - 1] - eq[t - 1]) + u[t]
        for i, c in enumerate(phi, start=1):
            v += c * dy[t - i]
        for dx, coefs in omegas:
            for j, c in enumerate(coefs):
                v += c * dx[t - j]
        dy[t] = v
        y[t] = y[t - 1] + v

    keep = slice(T - dgp.n, T)
    dates = np.datetime64("2000-01-03") + np.arange(dgp.n)
    cols = [PanelColumn(dgp.name("dependent"), "dependent", y[keep])]
    cols += [PanelColumn(dgp.name(r), r, X[r][keep]) for r in roles]
    return AlignedPanel(dates, tuple(cols))


def true_parameters(dgp: DgpSpec, gamma: float | None = None) -> dict:
    """Population values keyed like ``EcmFit.parameters()``.

    With ``gamma`` the intercept and, under location-scale errors, the
    contemporaneous coefficient of ``scale_role`` are the conditional
    quantile values; otherwise the conditional-mean values.
    """
    spec = dgp.model_spec()
    err = dgp.error
    qe = err.quantile(gamma) if gamma is not None else 0.0
    out = {"alpha": dgp.alpha + err.scale * qe, "rho*": dgp.rho}
    for r in dgp.roles:
        out[f"beta_{dgp.name(r)}"] = dgp.long_run[r]
    phi = list(dgp.phi)
    for i in range(1, spec.p):
        out[f"phi_{i}"] = phi[i - 1]
    for r in dgp.roles:
        coefs = list(dgp.short_run.get(r, ()))
        for j in spec.ecm_diff_lags(r):
            c = coefs[j] if j < len(coefs) else 0.0
            if j == 0 and err.kind == "location-scale" and r == err.scale_role:
                c += err.scale * err.slope * qe
            out[f"{SYMBOLS[r]}_{j}"] = c
    if spec.p > 1:
        out["phi*"] = math.fsum(phi)
    for r in dgp.roles:
        out[f"{SYMBOLS[r]}*"] = math.fsum(out[f"{SYMBOLS[r]}_{j}"] for j in spec.ecm_diff_lags(r))
    return out


@dataclass(frozen=True)
class StudyRow:
    estimator: str
    gamma: float | None
    parameter: str
    truth: float
    mean: float
    median: float
    bias: float
    rmse: float
    coverage: float
    replications: int


@dataclass(frozen=True)
class StudyReport:
    rows: tuple
    replications: int
    failures: int
    n: int
    seed: int
    level: float
    estimates: dict = field(default_factory=dict, repr=False)

    def row(self, parameter: str, gamma: float | None = None) -> StudyRow:
        for r in self.rows:
            if r.parameter == parameter and (gamma is None or r.gamma == gamma):
                return r
        raise KeyError((parameter, gamma))


def _estimate_once(dgp, estimator, gammas, seed):
    panel = simulate_panel(dataclasses.replace(dgp, seed=seed))
    spec = dgp.model_spec()
    out = {}
    if estimator == "ardl":
        ecm = to_ecm(fit_linear_ardl(panel, spec))
        out[None] = ecm.parameters()
    else:
        fits = fit_qardl(panel, spec, gammas)
        if fits.failures:
            raise EstimationError(f"quantile fits failed: {fits.failures}")
        for g, rec in fits.records.items():
            out[g] = rec.parameters()
    return out


def run_recovery_study(
    dgp: DgpSpec,
    replications: int,
    estimator: str = "ardl",
    quantiles: Sequence[float] = (0.5,),
    level: float = 0.95,
    n_jobs: int = 1,
) -> StudyReport:
    """Monte-Carlo bias, RMSE and interval coverage of an estimator.

    Replication ``i`` simulates with the ``i``-th child of
    ``SeedSequence(dgp.seed)``; statistics are computed from the sorted
    per-replication estimates, so the report is independent of ``n_jobs``.

    Parameters
    ----------
    dgp : DgpSpec
    replications : int
        Fewer than 50 triggers a warning (coverage estimates unreliable).
    estimator : {"ardl", "qardl"}
    quantiles : sequence of float
        Quantile levels for ``estimator="qardl"``.
    level : float
        Nominal coverage of the Wald intervals.
    """
    if estimator not in ("ardl", "qardl"):
        raise ConfigError(f"estimator must be 'ardl' or 'qardl', got {estimator!r}")
    if replications < 2:
        raise ConfigError("need at least 2 replications")
    if replications < 50:
        warnings.warn(
            f"{replications} replications: coverage estimates are unreliable below 50",
            UserWarning,
            stacklevel=2,
        )
    gammas = tuple(sorted({round(float(g), 10) for g in quantiles})) if estimator == "qardl" else ()
    seeds = np.random.SeedSequence(dgp.seed).spawn(replications)
    z = float(stats.norm.ppf(0.5 + level / 2))

    def one(ss):
        try:
            return _estimate_once(dgp, estimator, gammas, ss), None
        except QardlError as exc:
            return None, f"{type(exc).__name__}: {exc}"

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as ex:
            results = list(ex.map(one, seeds))
    else:
        results = [one(s) for s in seeds]
    errors = [msg for _, msg in results if msg is not None]
    if len(errors) > 0.2 * replications:
        raise EstimationError(
            f"estimator failed in {len(errors)} of {replications} replications; "
            f"first errors: {errors[:3]}"
        )
    good = [r for r, _ in results if r is not None]

    rows = []
    estimates = {}
    for g in (gammas if estimator == "qardl" else (None,)):
        truth = true_parameters(dgp, g)
        for name, tv in truth.items():
            vals = np.array([r[g][name].value for r in good if name in r[g]])
            ses = np.array([r[g][name].std_error for r in good if name in r[g]])
            ok = np.isfinite(vals)
            vals, ses = vals[ok], ses[ok]
            if vals.size == 0:
                continue
            estimates[(g, name)] = np.sort(vals)
            err = np.sort(vals - tv)
            cover = np.abs(vals - tv) <= z * ses
            rows.append(
                StudyRow(
                    estimator=estimator,
                    gamma=g,
                    parameter=name,
                    truth=float(tv),
                    mean=math.fsum(np.sort(vals)) / vals.size,
                    median=float(np.median(vals)),
                    bias=math.fsum(err) / err.size,
                    rmse=math.sqrt(math.fsum(np.sort(err**2)) / err.size),
                    coverage=float(np.count_nonzero(cover)) / vals.size,
                    replications=int(vals.size),
                )
            )
    return StudyReport(
        rows=tuple(rows),
        replications=replications,
        failures=len(errors),
        n=dgp.n,
        seed=int(dgp.seed) if not isinstance(dgp.seed, np.random.SeedSequence) else -1,
        level=level,
        estimates=estimates,
    )

"""
Linear ARDL estimation and its error-correction parameterisation.

The levels regression is fit by OLS.  ``to_ecm`` refits the equivalent
differenced layout so the adjustment coefficient ``rho`` and the lag-1
level coefficients come out directly, then derives

* long-run coefficients ``beta_X = -phi_X / rho``;
* cumulative short-run effects (sums of each variable's difference terms);

with delta-method standard errors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .design import SYMBOLS, LagDesign, ModelSpec, build_lag_design
from .errors import DataError, EstimationError, RankDeficiencyError
from .estimates import Estimate
from .regression import OlsFit, delta_method, ols_fit, ratio_transform, sum_transform
from .series import AlignedPanel

__all__ = [
    "ArdlFit",
    "EcmFit",
    "ecm_from_coefficients",
    "fit_linear_ardl",
    "to_ecm",
    "select_lags",
]

RHO_EPS = 1e-10


@dataclass(frozen=True, eq=False)
class ArdlFit:
    """OLS fit of the levels ARDL equation."""

    spec: ModelSpec
    panel: AlignedPanel
    design: LagDesign
    ols: OlsFit
    levels_coefficients: dict

    @property
    def labels(self) -> tuple[str, ...]:
        return self.design.symbols

    @property
    def covariance(self) -> np.ndarray:
        return self.ols.covariance

    @property
    def residuals(self) -> np.ndarray:
        return self.ols.residuals

    @property
    def aic(self) -> float:
        return self.ols.aic

    @property
    def bic(self) -> float:
        return self.ols.bic


@dataclass(frozen=True, eq=False)
class EcmFit:
    """Error-correction form of an ARDL (or quantile ARDL) fit.

    Dictionaries are keyed by symbol: ``long_run`` by regressor role,
    ``cumulative`` by ``"phi*"``, ``"omega*"`` ..., ``short_run`` by
    ``"phi_1"``, ``"omega_0"`` ... and ``levels`` by ``"rho"``,
    ``"level_epu"`` ...
    """

    method: str
    spec: ModelSpec
    names: dict
    design: LagDesign
    coefficients: np.ndarray
    covariance: np.ndarray
    residuals: np.ndarray
    intercept: Estimate
    rho: Estimate
    levels: dict
    long_run: dict
    long_run_covariance: np.ndarray | None
    cumulative: dict
    short_run: dict
    quantile: float | None = None
    projection: dict = field(default_factory=dict)
    warnings: tuple = ()

    @property
    def rho_star(self) -> Estimate:
        return self.rho

    @property
    def adjustment_speed(self) -> float:
        """Percentage of a deviation from equilibrium corrected per period."""
        return 100.0 * abs(self.rho.value)

    @property
    def error_correcting(self) -> bool:
        return self.rho.value < 0 and self.rho.p_value < 0.05

    def long_run_label(self, role: str) -> str:
        return f"beta_{self.names[role]}"

    def parameters(self) -> dict:
        """Flat ``label -> Estimate`` view in table order."""
        out = {"alpha": self.intercept, "rho*": self.rho}
        for role, est in self.long_run.items():
            out[self.long_run_label(role)] = est
        out.update(self.short_run)
        out.update(self.cumulative)
        return out


def _stars_warning(rho: Estimate) -> tuple:
    if not rho.value < 0:
        return (f"rho* = {rho.value:.4g} is not negative: no error correction at this fit",)
    if not rho.p_value < 0.05:
        return (f"rho* = {rho.value:.4g} is not significant at 5% (p = {rho.p_value:.3g})",)
    return ()


def ecm_from_coefficients(
    design: LagDesign,
    coefficients,
    covariance,
    residuals,
    names: Mapping[str, str],
    method: str,
    quantile: float | None = None,
    strict: bool = True,
    extra_warnings: tuple = (),
) -> EcmFit:
    """Derive long-run and cumulative short-run parameters from an ECM fit.

    ``strict=False`` marks long-run coefficients undefined (NaN) when
    ``rho`` is numerically zero instead of raising.
    """
    if design.form != "ecm":
        raise ValueError("ecm_from_coefficients needs an 'ecm' design")
    theta = np.asarray(coefficients, dtype=float)
    cov = np.asarray(covariance, dtype=float)
    se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    k = theta.size
    labels = design.labels
    est = [Estimate(float(theta[i]), float(se[i])) for i in range(k)]
    by_sym = dict(zip(design.symbols, est))

    i_rho = design.index("rho")
    rho = by_sym["rho"]
    regressors = [lab.role for lab in labels if lab.kind == "level" and lab.role != "dependent"]
    levels = {lab.symbol: by_sym[lab.symbol] for lab in labels if lab.kind == "level"}
    warnings = list(extra_warnings)

    long_run = {}
    lr_cov = None
    num = [design.index(f"level_{r}") for r in regressors]
    if abs(rho.value) < RHO_EPS:
        if strict:
            raise EstimationError(
                "rho is within 1e-10 of zero: no error-correction representation"
            )
        warnings.append("rho is numerically zero; long-run coefficients undefined")
        long_run = {r: Estimate(math.nan, math.nan) for r in regressors}
    elif regressors:
        tr = ratio_transform(num, i_rho, k)
        vals, ses, lr_cov = delta_method(theta, cov, tr)
        long_run = {r: Estimate(float(v), float(s)) for r, v, s in zip(regressors, vals, ses)}
    warnings.extend(_stars_warning(rho))

    short_run = {}
    groups, gnames = [], []
    for role in ("dependent", *regressors):
        idx = [i for i, lab in enumerate(labels) if lab.kind == "diff" and lab.role == role]
        for i in idx:
            short_run[labels[i].symbol] = est[i]
        if idx:
            groups.append(idx)
            gnames.append(f"{SYMBOLS[role]}*")
    cumulative = {}
    if groups:
        tr = sum_transform(groups, k)
        _, ses, _ = delta_method(theta, cov, tr)
        for g, name, s in zip(groups, gnames, ses):
            cumulative[name] = Estimate(math.fsum(theta[g]), float(s))

    for role in regressors:
        if design.spec.q.get(role) == 0:
            warnings.append(
                f"{names[role]} has q=0: its contemporaneous difference is kept, so the "
                "differenced equation matches the levels model with q=1"
            )

    return EcmFit(
        method=method,
        spec=design.spec,
        names=dict(names),
        design=design,
        coefficients=theta,
        covariance=cov,
        residuals=np.asarray(residuals, dtype=float),
        intercept=by_sym["alpha"],
        rho=rho,
        levels=levels,
        long_run=long_run,
        long_run_covariance=lr_cov,
        cumulative=cumulative,
        short_run=short_run,
        quantile=quantile,
        warnings=tuple(warnings),
    )


def fit_linear_ardl(panel: AlignedPanel, spec: ModelSpec, max_lag: int | None = None) -> ArdlFit:
    """OLS on the levels ARDL design."""
    design = build_lag_design(panel, spec, "levels", max_lag=max_lag)
    fit = ols_fit(design.regressors, design.response, labels=[str(l) for l in design.labels])
    coefs = {
        sym: Estimate(float(b), float(s))
        for sym, b, s in zip(design.symbols, fit.coefficients, fit.std_errors)
    }
    return ArdlFit(spec, panel, design, fit, coefs)


def to_ecm(fit: ArdlFit) -> EcmFit:
    """Refit ``fit`` in error-correction form and derive long-run effects."""
    design = build_lag_design(fit.panel, fit.spec, "ecm", max_lag=len(fit.panel) - fit.design.nobs)
    ols = ols_fit(design.regressors, design.response, labels=[str(l) for l in design.labels])
    return ecm_from_coefficients(
        design, ols.coefficients, ols.covariance, ols.residuals, fit.panel.role_map(), "ols"
    )


def select_lags(
    panel: AlignedPanel, max_p: int, max_q: int, criterion: str = "bic"
) -> ModelSpec:
    """Exhaustive information-criterion search over ARDL lag orders.

    Every candidate ``p in 1..max_p``, ``q_X in 0..max_q`` is fit on the
    sample left after dropping ``max(max_p, max_q)`` leading observations.
    Ties go to the smaller total lag count, then the lexicographically
    smaller ``(p, q...)``.
    """
    if criterion not in ("aic", "bic"):
        raise ValueError(f"criterion must be 'aic' or 'bic', got {criterion!r}")
    if max_p < 1 or max_q < 0:
        raise ValueError("need max_p >= 1 and max_q >= 0")
    roles = panel.regressor_roles
    if max_p == 1 and max_q == 0:
        return ModelSpec(1, {r: 0 for r in roles})

    full = ModelSpec(max_p, {r: max_q for r in roles})
    common = full.max_lag
    design = build_lag_design(panel, full, "levels", max_lag=common)
    X_all, y = design.regressors, design.response
    n = y.size
    pos = {(lab.role, lab.lag): i for i, lab in enumerate(design.labels)}

    best = None
    for p in range(1, max_p + 1):
        for qs in itertools.product(range(max_q + 1), repeat=len(roles)):
            cols = [0] + [pos[("dependent", i)] for i in range(1, p + 1)]
            for r, q in zip(roles, qs):
                cols += [pos[(r, j)] for j in range(q + 1)]
            X = X_all[:, cols]
            k = X.shape[1]
            if n <= k:
                raise DataError("insufficient observations for the lag search")
            beta, ssr, rank, _ = np.linalg.lstsq(X, y, rcond=None)
            if rank < k:
                raise RankDeficiencyError(
                    f"candidate p={p}, q={dict(zip(roles, qs))} has a rank-deficient design"
                )
            ssr = float(ssr[0]) if ssr.size else float(np.sum((y - X @ beta) ** 2))
            llf = -0.5 * n * (np.log(2 * np.pi) + np.log(ssr / n) + 1.0)
            pen = 2 * k if criterion == "aic" else np.log(n) * k
            key = (-2 * llf + pen, p + sum(qs), (p, *qs))
            if best is None or key < best:
                best = key
    p, *qs = best[2]
    return ModelSpec(p, dict(zip(roles, qs)))

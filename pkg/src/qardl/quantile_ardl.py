"""
Quantile ARDL in error-correction form.

Each quantile level is fit independently on the differenced design, whose
contemporaneous regressor differences absorb the projection of the
quantile error on ``dX_t``.  The literal two-step route (quantile fit
without ``dX_t``, then an OLS projection of its residual on ``dX_t``) is
available with ``projection="two-stage"``; the loadings of that projection
are reported for every record either way.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

from .ardl import RHO_EPS, EcmFit, ecm_from_coefficients
from .design import SYMBOLS, ModelSpec, build_lag_design
from .errors import EstimationError
from .estimates import Estimate
from .regression import (
    delta_method,
    kernel_covariance,
    ols_fit,
    quantile_fit,
    ratio_transform,
    sum_transform,
)
from .series import AlignedPanel

__all__ = [
    "DEFAULT_QUANTILES",
    "QardlFitSet",
    "BandRow",
    "fit_qardl",
    "long_run_coefficients",
    "cumulative_short_run",
    "confidence_bands",
]

DEFAULT_QUANTILES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


def _key(gamma: float) -> float:
    return round(float(gamma), 10)


@dataclass(frozen=True, eq=False)
class QardlFitSet:
    """Per-quantile error-correction fits, in increasing quantile order.

    ``failures`` maps each quantile whose fit raised to the error message;
    the remaining quantiles are still present in ``records``.
    """

    spec: ModelSpec
    names: dict
    records: dict
    failures: dict = field(default_factory=dict)
    se_method: str = "kernel"
    projection_mode: str = "joint"

    @property
    def quantiles(self) -> tuple[float, ...]:
        return tuple(self.records)

    def __getitem__(self, gamma: float) -> EcmFit:
        return self.records[_key(gamma)]

    def __iter__(self):
        return iter(self.records.values())

    def __len__(self):
        return len(self.records)


def _quantile_seed(seed: int, gamma: float) -> np.random.SeedSequence:
    # depends only on (seed, gamma) so a quantile's bootstrap does not
    # change with the rest of the grid
    return np.random.SeedSequence([int(seed), int(round(gamma * 1_000_000))])


def _projection(design, y, gamma):
    """Stage-A quantile fit without ``dX_t`` and the OLS projection of its residual."""
    labels = design.labels
    contemp = [i for i, l in enumerate(labels) if l.kind == "diff" and l.lag == 0 and l.role != "dependent"]
    keep = [i for i in range(len(labels)) if i not in contemp]
    X = design.regressors
    stage_a = quantile_fit(X[:, keep], y, gamma, se="none")
    nu = stage_a.residuals
    Z = np.column_stack([np.ones(y.size), X[:, contemp]])
    proj = ols_fit(Z, nu)
    return keep, contemp, stage_a, proj


def _fit_one(design, names, gamma, se, n_boot, seed, mode):
    X, y = design.regressors, design.response
    labels = [str(l) for l in design.labels]
    keep, contemp, stage_a, proj = _projection(design, y, gamma)
    loadings = {
        design.labels[i].role: Estimate(float(b), float(s))
        for i, b, s in zip(contemp, proj.coefficients[1:], proj.std_errors[1:])
    }
    extra = ()
    if mode == "joint":
        boot_seed = _quantile_seed(seed, gamma) if se == "bootstrap" else None
        qf = quantile_fit(X, y, gamma, labels=labels, se=se, n_boot=n_boot, seed=boot_seed)
        theta, cov, resid = qf.coefficients, qf.covariance, qf.residuals
    else:
        theta = np.zeros(X.shape[1])
        theta[keep] = stage_a.coefficients
        theta[contemp] = proj.coefficients[1:]
        eps = proj.residuals
        theta[0] += proj.coefficients[0] + float(np.quantile(eps, gamma, method="inverted_cdf"))
        resid = y - X @ theta
        cov, _ = kernel_covariance(X, resid, gamma)
        extra = ("two-stage projection estimate; covariance is the kernel sandwich at these coefficients",)
    rec = ecm_from_coefficients(
        design, theta, cov, resid, names, "quantile", quantile=gamma, strict=False,
        extra_warnings=extra,
    )
    return dataclasses.replace(rec, projection=loadings)


def fit_qardl(
    panel: AlignedPanel,
    spec: ModelSpec,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
    se: str = "kernel",
    n_boot: int = 500,
    seed: int = 0,
    projection: str = "joint",
    n_jobs: int = 1,
) -> QardlFitSet:
    """Fit the quantile error-correction model at each level in ``quantiles``.

    Parameters
    ----------
    panel : AlignedPanel
    spec : ModelSpec
    quantiles : sequence of float
        Levels in (0, 1); duplicates are fit once.
    se : {"kernel", "bootstrap"}
    n_boot : int
        Bootstrap replications when ``se="bootstrap"``.
    seed : int
        Master seed of the bootstrap.
    projection : {"joint", "two-stage"}
    n_jobs : int
        Quantiles fit concurrently in threads when > 1; results are
        identical to the sequential run.

    Returns
    -------
    QardlFitSet
    """
    if projection not in ("joint", "two-stage"):
        raise ValueError(f"projection must be 'joint' or 'two-stage', got {projection!r}")
    if se not in ("kernel", "bootstrap"):
        raise ValueError(f"se must be 'kernel' or 'bootstrap', got {se!r}")
    gammas = sorted({_key(g) for g in quantiles})
    for g in gammas:
        if not 0.0 < g < 1.0:
            raise ValueError(f"quantile levels must lie in (0, 1), got {g!r}")
    design = build_lag_design(panel, spec, "ecm")
    names = panel.role_map()

    def run(g):
        try:
            return g, _fit_one(design, names, g, se, n_boot, seed, projection), None
        except EstimationError as exc:
            return g, None, str(exc)

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as ex:
            results = list(ex.map(run, gammas))
    else:
        results = [run(g) for g in gammas]
    records = {g: r for g, r, _ in results if r is not None}
    failures = {g: msg for g, _, msg in results if msg is not None}
    return QardlFitSet(spec, names, records, failures, se, projection)


def long_run_coefficients(record: EcmFit) -> dict:
    """``beta_X = -level_X / rho`` with delta-method standard errors."""
    d = record.design
    i_rho = d.index("rho")
    if abs(record.coefficients[i_rho]) < RHO_EPS:
        raise EstimationError("rho is within 1e-10 of zero; long-run coefficients undefined")
    roles = [l.role for l in d.labels if l.kind == "level" and l.role != "dependent"]
    num = [d.index(f"level_{r}") for r in roles]
    vals, ses, _ = delta_method(
        record.coefficients, record.covariance, ratio_transform(num, i_rho, len(d.labels))
    )
    return {r: Estimate(float(v), float(s)) for r, v, s in zip(roles, vals, ses)}


def cumulative_short_run(record: EcmFit) -> dict:
    """Sums of each variable's difference coefficients, ``1' Cov 1`` variances."""
    d = record.design
    out = {}
    groups, names = [], []
    for role in ("dependent", *d.spec.roles):
        idx = [i for i, l in enumerate(d.labels) if l.kind == "diff" and l.role == role]
        if idx:
            groups.append(idx)
            names.append(f"{SYMBOLS[role]}*")
    if not groups:
        return out
    _, ses, _ = delta_method(
        record.coefficients, record.covariance, sum_transform(groups, len(d.labels))
    )
    for g, name, s in zip(groups, names, ses):
        out[name] = Estimate(math.fsum(record.coefficients[g]), float(s))
    return out


class BandRow(NamedTuple):
    parameter: str
    gamma: float
    lo: float
    est: float
    hi: float


def confidence_bands(fits: QardlFitSet, level: float = 0.95) -> list[BandRow]:
    """Long-format table ``estimate -/+ z * std_error`` per parameter and quantile."""
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    z = float(stats.norm.ppf(0.5 + level / 2.0))
    params: list[str] = []
    for rec in fits:
        for name in rec.parameters():
            if name not in params:
                params.append(name)
    rows = []
    for name in params:
        for g, rec in fits.records.items():
            e = rec.parameters().get(name, Estimate(math.nan, math.nan))
            rows.append(BandRow(name, g, e.value - z * e.std_error, e.value, e.value + z * e.std_error))
    return rows

"""
Least-squares and quantile regression solvers with coefficient covariances.

Quantile regression is solved as a linear program with HiGHS (dual simplex
on the bounded dual, interior point for very large problems).  The LP
solution is then snapped to an exact vertex, i.e. the coefficients are
recomputed from the ``k`` observations they interpolate, and among
multiple optimal vertices the lexicographically smallest coefficient
vector is returned.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
import scipy.linalg
from scipy import sparse, stats
from scipy.optimize import linprog

from .errors import ConvergenceError, EstimationError, RankDeficiencyError

__all__ = [
    "OlsFit",
    "QrFit",
    "ols_fit",
    "quantile_fit",
    "check_loss",
    "hall_sheather_bandwidth",
    "kernel_covariance",
    "bootstrap_covariance",
    "Transform",
    "identity_transform",
    "sum_transform",
    "ratio_transform",
    "delta_method",
]

LP_TOL = 1e-9
GAP_TOL = 1e-8
SIMPLEX_MAX_N = 5000


def _labels(k, labels):
    return list(labels) if labels is not None else [f"x{j}" for j in range(k)]


def _check_shapes(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.size != n:
        raise ValueError(f"X has {n} rows but y has {y.size} entries")
    if n <= k:
        raise EstimationError(f"need more observations than columns (n={n}, k={k})")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise EstimationError("non-finite values in design or response")
    return X, y


def _rank_check(X, labels=None, rtol=None):
    """Raise RankDeficiencyError naming the dependent columns."""
    n, k = X.shape
    _, R, piv = scipy.linalg.qr(X, mode="economic", pivoting=True)
    d = np.abs(np.diag(R))
    if rtol is None:
        rtol = max(n, k) * np.finfo(float).eps * 10
    if d.size == 0 or d[0] == 0:
        bad = list(range(k))
    elif np.all(d > rtol * d[0]):
        return
    else:
        # rank-deficient: name each column that adds no rank to those before it
        tol = rtol * d[0]
        bad, rank = [], 0
        for j in range(k):
            r = np.linalg.matrix_rank(X[:, : j + 1], tol=tol)
            if r == rank:
                bad.append(j)
            rank = r
    if bad:
        names = _labels(k, labels)
        cols = [names[j] for j in bad]
        raise RankDeficiencyError(
            f"design matrix is rank deficient; dependent columns: {cols}", columns=cols
        )


@dataclass(frozen=True, eq=False)
class OlsFit:
    coefficients: np.ndarray
    covariance: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    dof: int
    ssr: float
    nobs: int

    @property
    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.diag(self.covariance))

    @property
    def sigma2(self) -> float:
        return self.ssr / self.dof

    @property
    def loglike(self) -> float:
        n = self.nobs
        return -0.5 * n * (np.log(2 * np.pi) + np.log(self.ssr / n) + 1.0)

    @property
    def aic(self) -> float:
        return -2 * self.loglike + 2 * self.coefficients.size

    @property
    def bic(self) -> float:
        return -2 * self.loglike + np.log(self.nobs) * self.coefficients.size


def ols_fit(X, y, labels: Sequence[str] | None = None) -> OlsFit:
    """Ordinary least squares through a Householder QR factorisation.

    The covariance is ``s^2 (X'X)^{-1}`` with ``s^2 = e'e / (n - k)``,
    formed from ``R^{-1}`` so that ``X'X`` is never built explicitly.
    """
    X, y = _check_shapes(X, y)
    n, k = X.shape
    _rank_check(X, labels)
    Q, R = np.linalg.qr(X, mode="reduced")
    beta = scipy.linalg.solve_triangular(R, Q.T @ y)
    fitted = X @ beta
    resid = y - fitted
    ssr = float(resid @ resid)
    dof = n - k
    Rinv = scipy.linalg.solve_triangular(R, np.eye(k))
    cov = (ssr / dof) * (Rinv @ Rinv.T)
    cov = 0.5 * (cov + cov.T)
    return OlsFit(beta, cov, resid, fitted, dof, ssr, n)


def check_loss(u, gamma: float) -> float:
    """Sum of the check function ``u * (gamma - 1{u < 0})``."""
    u = np.asarray(u, dtype=float)
    return float(np.sum(u * (gamma - (u < 0))))


@dataclass(frozen=True, eq=False)
class QrFit:
    """Quantile regression fit at one quantile level."""

    quantile: float
    coefficients: np.ndarray
    covariance: np.ndarray
    objective: float
    residuals: np.ndarray
    gap: float
    basis: np.ndarray
    se_method: str
    bandwidth: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.diag(self.covariance))

    @property
    def nobs(self) -> int:
        return self.residuals.size


def _solve_dual(X, y, gamma, method):
    # max y'a  s.t.  X'a = (1-gamma) X'1,  0 <= a <= 1
    n, k = X.shape
    res = linprog(
        -y,
        A_eq=X.T,
        b_eq=(1.0 - gamma) * X.sum(axis=0),
        bounds=(0.0, 1.0),
        method=method,
        options={
            "primal_feasibility_tolerance": LP_TOL,
            "dual_feasibility_tolerance": LP_TOL,
            "maxiter": 50 * (n + k) + 1000,
        },
    )
    if res.status == 1:
        raise ConvergenceError(f"quantile LP hit its iteration cap: {res.message}")
    if res.status != 0:
        raise EstimationError(f"quantile LP failed: {res.message}")
    beta = -np.asarray(res.eqlin.marginals, dtype=float)
    dual_obj = float(y @ res.x) - (1.0 - gamma) * float(y.sum())
    return beta, dual_obj


def _independent_rows(X, order, k):
    """First ``k`` rows of ``X`` in ``order`` that are linearly independent."""
    chosen = []
    basis = np.zeros((0, X.shape[1]))
    scale = np.max(np.abs(X)) or 1.0
    for i in order:
        cand = np.vstack([basis, X[i]])
        if np.linalg.matrix_rank(cand, tol=1e-10 * scale * cand.shape[0]) == cand.shape[0]:
            chosen.append(int(i))
            basis = cand
            if len(chosen) == k:
                break
    return np.array(chosen, dtype=int)


def _snap_to_vertex(X, y, gamma, beta, obj_ref):
    """Recompute ``beta`` from the ``k`` observations it interpolates."""
    k = X.shape[1]
    e = y - X @ beta
    order = np.lexsort((np.arange(e.size), np.abs(e)))
    h = _independent_rows(X, order, k)
    if h.size < k:
        return beta, np.array([], dtype=int)
    bv = np.linalg.solve(X[h], y[h])
    tol = LP_TOL * max(1.0, abs(obj_ref))
    if check_loss(y - X @ bv, gamma) <= obj_ref + tol:
        return bv, np.sort(h)
    return beta, np.sort(h)


def _vertex_is_unique(X, y, gamma, beta, h):
    """Strict optimality test at a vertex; False means ties may exist."""
    if h.size != X.shape[1]:
        return False
    e = y - X @ beta
    scale = np.max(np.abs(y)) + 1.0
    tol_e = 1e-9 * scale
    # identical rows act as one observation with weight equal to their count
    # (bootstrap resamples repeat basis rows)
    _, group, counts = np.unique(np.column_stack([X, y]), axis=0, return_inverse=True, return_counts=True)
    group = group.ravel()
    mask = ~np.isin(group, group[h])
    if np.any(np.abs(e[mask]) <= tol_e):
        return False
    psi = gamma - (e[mask] < 0)
    g = X[mask].T @ psi
    try:
        w = np.linalg.solve(X[h].T, -g)
    except np.linalg.LinAlgError:
        return False
    c = counts[group[h]]
    slack = 1e-9
    return bool(np.all(w > (gamma - 1) * c + slack) and np.all(w < gamma * c - slack))


def _lexicographic_refine(X, y, gamma, obj):
    """Smallest coefficient vector (lexicographic) on the optimal face."""
    n, k = X.shape
    c_obj = np.concatenate([np.zeros(k), np.full(n, gamma), np.full(n, 1.0 - gamma)])
    A_eq = sparse.hstack(
        [sparse.csr_matrix(X), sparse.identity(n), -sparse.identity(n)], format="csr"
    )
    A_ub = [c_obj]
    b_ub = [obj + LP_TOL * max(1.0, abs(obj))]
    bounds = [(None, None)] * k + [(0, None)] * (2 * n)
    beta = None
    for j in range(k):
        c = np.zeros(k + 2 * n)
        c[j] = 1.0
        res = linprog(
            c,
            A_ub=np.array(A_ub),
            b_ub=np.array(b_ub),
            A_eq=A_eq,
            b_eq=y,
            bounds=bounds,
            method="highs",
        )
        if res.status != 0:
            return None
        beta = res.x[:k]
        bj = beta[j]
        bounds[j] = (bj, bj + 1e-12 * max(1.0, abs(bj)))
    return beta


def hall_sheather_bandwidth(n: int, gamma: float, alpha: float = 0.05) -> float:
    """Hall-Sheather bandwidth on the probability scale."""
    z = stats.norm.ppf(gamma)
    za = stats.norm.ppf(1 - alpha / 2)
    return n ** (-1 / 3) * za ** (2 / 3) * (
        1.5 * stats.norm.pdf(z) ** 2 / (2 * z**2 + 1)
    ) ** (1 / 3)


def kernel_covariance(X, residuals, gamma: float) -> tuple[np.ndarray, float]:
    """Powell sandwich covariance with an Epanechnikov kernel.

    Returns
    -------
    cov : ndarray
    h : float
        Bandwidth on the residual scale.
    """
    X = np.asarray(X, dtype=float)
    e = np.asarray(residuals, dtype=float)
    n = e.size
    hb = hall_sheather_bandwidth(n, gamma)
    lo, hi = max(gamma - hb, 1e-6), min(gamma + hb, 1 - 1e-6)
    iqr = np.subtract(*np.percentile(e, [75, 25]))
    kappa = min(np.std(e, ddof=1), iqr / 1.34) if iqr > 0 else np.std(e, ddof=1)
    h = kappa * (stats.norm.ppf(hi) - stats.norm.ppf(lo))
    if not h > 0:
        # noiseless fit: residual density is degenerate, report zero covariance
        return np.zeros((X.shape[1], X.shape[1])), 0.0
    u = e / h
    w = np.where(np.abs(u) <= 1, 0.75 * (1 - u**2), 0.0)
    J = (X * w[:, None]).T @ X / (n * h)
    Omega = gamma * (1 - gamma) * (X.T @ X) / n
    try:
        Jinv = np.linalg.inv(J)
    except np.linalg.LinAlgError:
        raise EstimationError("kernel density matrix is singular") from None
    cov = Jinv @ Omega @ Jinv / n
    return 0.5 * (cov + cov.T), float(h)


def _fit_coefficients(X, y, gamma):
    n, k = X.shape
    method = "highs-ds" if n <= SIMPLEX_MAX_N else "highs-ipm"
    beta_lp, dual_obj = _solve_dual(X, y, gamma, method)
    obj_lp = check_loss(y - X @ beta_lp, gamma)
    beta, h = _snap_to_vertex(X, y, gamma, beta_lp, obj_lp)
    obj = check_loss(y - X @ beta, gamma)
    if not _vertex_is_unique(X, y, gamma, beta, h):
        refined = _lexicographic_refine(X, y, gamma, min(obj, obj_lp))
        if refined is not None:
            b2, h2 = _snap_to_vertex(X, y, gamma, refined, check_loss(y - X @ refined, gamma))
            o2 = check_loss(y - X @ b2, gamma)
            if o2 <= obj + LP_TOL * max(1.0, abs(obj)):
                beta, h, obj = b2, h2, o2
    gap = obj - dual_obj
    if gap > GAP_TOL * max(1.0, abs(obj)) * 10:
        raise ConvergenceError(f"quantile fit duality gap {gap:.3g} exceeds tolerance", gap)
    return beta, obj, max(gap, 0.0), h


def quantile_fit(
    X,
    y,
    gamma: float,
    labels: Sequence[str] | None = None,
    se: str = "kernel",
    n_boot: int = 500,
    seed: int | None = None,
) -> QrFit:
    """Minimise the check-function loss at quantile ``gamma``.

    Parameters
    ----------
    X : (n, k) array_like
        Full-rank design (include an intercept column yourself).
    y : (n,) array_like
    gamma : float
        Quantile level in (0, 1).
    labels : sequence of str, optional
        Column names used in rank-deficiency errors.
    se : {"kernel", "bootstrap", "none"}
        Covariance estimator.  ``"bootstrap"`` resamples (x, y) pairs
        ``n_boot`` times using ``seed``.

    Returns
    -------
    QrFit
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"quantile must lie in (0, 1), got {gamma!r}")
    X, y = _check_shapes(X, y)
    _rank_check(X, labels)
    beta, obj, gap, h = _fit_coefficients(X, y, gamma)
    resid = y - X @ beta
    bw = None
    k = X.shape[1]
    if se == "kernel":
        cov, bw = kernel_covariance(X, resid, gamma)
    elif se == "bootstrap":
        if seed is None:
            raise ValueError("bootstrap covariance needs an explicit seed")
        cov = bootstrap_covariance(X, y, gamma, n_boot=n_boot, seed=seed)
    elif se == "none":
        cov = np.full((k, k), np.nan)
    else:
        raise ValueError(f"unknown se method {se!r}")
    return QrFit(gamma, beta, cov, obj, resid, gap, h, se, bw)


def bootstrap_covariance(
    X, y, gamma: float, n_boot: int = 500, seed: int = 0, n_jobs: int = 1
) -> np.ndarray:
    """Pairs-bootstrap covariance of quantile-regression coefficients.

    Replication ``b`` draws its rows from a generator seeded with the
    ``b``-th child of ``SeedSequence(seed)``, so the result does not
    depend on ``n_jobs`` or scheduling.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if isinstance(seed, np.random.SeedSequence):
        # spawn() advances its receiver, so work on a copy
        root = np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key)
    else:
        root = np.random.SeedSequence(seed)
    children = root.spawn(n_boot)

    def one(ss):
        rng = np.random.default_rng(ss)
        idx = rng.integers(0, n, size=n)
        Xb, yb = X[idx], y[idx]
        if np.linalg.matrix_rank(Xb) < k:
            return None
        b, *_ = _fit_coefficients(Xb, yb, gamma)
        return b

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as ex:
            draws = list(ex.map(one, children))
    else:
        draws = [one(ss) for ss in children]
    draws = np.array([d for d in draws if d is not None])
    if draws.shape[0] < max(10, n_boot // 2):
        raise EstimationError("too many singular bootstrap resamples")
    return np.cov(draws, rowvar=False, ddof=1).reshape(k, k)


class Transform(NamedTuple):
    """A differentiable map with its analytic Jacobian."""

    func: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    labels: tuple = ()


def identity_transform(k: int) -> Transform:
    return Transform(lambda t: np.array(t, dtype=float), lambda t: np.eye(k))


def sum_transform(groups: Sequence[Sequence[int]], k: int, labels=()) -> Transform:
    """Sums of coefficient groups; each group is a list of indices."""
    groups = [list(g) for g in groups]
    G = np.zeros((len(groups), k))
    for r, g in enumerate(groups):
        G[r, g] = 1.0

    def func(t):
        t = np.asarray(t, dtype=float)
        return np.array([t[g].sum() if g else 0.0 for g in groups])

    return Transform(func, lambda t: G.copy(), tuple(labels))


def ratio_transform(numerators: Sequence[int], denominator: int, k: int, labels=()) -> Transform:
    """Long-run ratios ``-theta[num] / theta[den]``."""
    numerators = list(numerators)

    def func(t):
        t = np.asarray(t, dtype=float)
        d = t[denominator]
        if abs(d) < 1e-10:
            raise EstimationError(
                f"denominator coefficient {d!r} is within 1e-10 of zero; "
                "long-run parameters are not defined"
            )
        return -t[numerators] / d

    def jac(t):
        t = np.asarray(t, dtype=float)
        d = t[denominator]
        if abs(d) < 1e-10:
            raise EstimationError("denominator coefficient is within 1e-10 of zero")
        J = np.zeros((len(numerators), k))
        for r, j in enumerate(numerators):
            J[r, j] = -1.0 / d
            J[r, denominator] += t[j] / d**2
        return J

    return Transform(func, jac, tuple(labels))


def delta_method(coefficients, covariance, transform: Transform):
    """First-order propagation of ``covariance`` through ``transform``.

    Returns
    -------
    values : ndarray
        ``g(theta)``.
    std_errors : ndarray
        Square roots of the diagonal of ``J Cov J'``.
    cov : ndarray
        Full transformed covariance.
    """
    theta = np.asarray(coefficients, dtype=float)
    cov = np.asarray(covariance, dtype=float)
    values = transform.func(theta)
    J = np.atleast_2d(transform.jacobian(theta))
    vcov = J @ cov @ J.T
    vcov = 0.5 * (vcov + vcov.T)
    return values, np.sqrt(np.clip(np.diag(vcov), 0.0, None)), vcov

"""
Lag specifications and regression design matrices.

Two layouts are produced from the same panel and lag orders:

``"levels"``
    ``Oil_t`` on an intercept, ``Oil_{t-1..t-p}`` and ``X_{t..t-q}`` for
    every regressor ``X``.
``"ecm"``
    ``dOil_t`` on an intercept, the lag-1 level of every variable,
    ``dOil_{t-1..t-p+1}`` and ``dX_{t..t-q+1}``.

Columns come out in a fixed order (intercept, levels, then differences
grouped by variable) so coefficients can be picked out by position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .errors import DataError
from .series import REGRESSOR_ROLES, ROLES, AlignedPanel

__all__ = ["SYMBOLS", "ModelSpec", "ColumnLabel", "LagDesign", "build_lag_design"]

# coefficient symbol attached to each role's lag polynomial
SYMBOLS = {
    "dependent": "phi",
    "epu": "omega",
    "sp500": "lambda",
    "csi300": "theta",
    "interest": "psi",
    "panic": "delta",
}

FORMS = ("levels", "ecm")


@dataclass(frozen=True)
class ModelSpec:
    """Lag orders of an ARDL(p, q1, ..., q5) equation.

    ``q`` maps each regressor role in the model to its lag order.  A
    constant is always included.
    """

    p: int
    q: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"p must be an integer >= 1, got {self.p!r}")
        q = {}
        for role in REGRESSOR_ROLES:
            if role in self.q:
                v = self.q[role]
                if int(v) != v or v < 0:
                    raise ValueError(f"q[{role!r}] must be an integer >= 0, got {v!r}")
                q[role] = int(v)
        extra = set(self.q) - set(REGRESSOR_ROLES)
        if extra:
            raise ValueError(f"unknown regressor roles in q: {sorted(extra)}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", q)

    def __hash__(self):
        return hash((self.p, tuple(self.q.items())))

    @property
    def roles(self) -> tuple[str, ...]:
        return tuple(self.q)

    @property
    def max_lag(self) -> int:
        return max([self.p, *self.q.values()])

    @property
    def total_lags(self) -> int:
        return self.p + sum(self.q.values())

    def ecm_diff_lags(self, role: str) -> range:
        """Lags of the differenced terms of ``role`` in the ECM layout."""
        if role == "dependent":
            return range(1, self.p)
        # a regressor always keeps its contemporaneous difference, even at q=0
        return range(0, max(self.q[role], 1))

    def levels_equivalent(self) -> "ModelSpec":
        """Levels spec whose design spans the same space as the ECM design."""
        return ModelSpec(self.p, {r: max(v, 1) for r, v in self.q.items()})

    def to_dict(self) -> dict:
        return {"p": self.p, "q": dict(self.q)}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ModelSpec":
        return cls(int(d["p"]), {k: int(v) for k, v in d.get("q", {}).items()})


class ColumnLabel(NamedTuple):
    variable: str
    role: str
    lag: int
    kind: str  # "const", "level" or "diff"
    symbol: str

    def __str__(self):
        if self.kind == "const":
            return "const"
        base = self.variable if self.lag == 0 else f"{self.variable}(-{self.lag})"
        return f"D.{base}" if self.kind == "diff" else base


@dataclass(frozen=True, eq=False)
class LagDesign:
    """Response vector and regressor matrix for one equation layout."""

    response: np.ndarray
    regressors: np.ndarray
    labels: tuple[ColumnLabel, ...]
    dates: np.ndarray
    form: str
    spec: ModelSpec

    @property
    def nobs(self) -> int:
        return self.response.size

    def index(self, symbol: str) -> int:
        for i, lab in enumerate(self.labels):
            if lab.symbol == symbol:
                return i
        raise KeyError(symbol)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(lab.symbol for lab in self.labels)


def _level_symbol(role: str) -> str:
    return "rho" if role == "dependent" else f"level_{role}"


def build_lag_design(
    panel: AlignedPanel,
    spec: ModelSpec,
    form: str = "levels",
    max_lag: int | None = None,
) -> LagDesign:
    """Build the design matrix of an ARDL equation.

    Parameters
    ----------
    panel : AlignedPanel
    spec : ModelSpec
        Must list exactly the regressor roles present in ``panel``.
    form : {"levels", "ecm"}
    max_lag : int, optional
        Number of leading observations to drop.  Defaults to
        ``spec.max_lag``; a larger value aligns several specs on one
        common sample.

    Returns
    -------
    LagDesign
    """
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    if set(spec.q) != set(panel.regressor_roles):
        raise DataError(
            f"spec roles {sorted(spec.q)} do not match panel regressors "
            f"{sorted(panel.regressor_roles)}"
        )
    lag0 = spec.max_lag if max_lag is None else int(max_lag)
    if lag0 < spec.max_lag:
        raise ValueError(f"max_lag={lag0} is smaller than the spec's {spec.max_lag}")
    n = len(panel)
    t = np.arange(lag0, n)
    y = panel.values("dependent")
    dep = panel.name_of("dependent")

    cols = [np.ones(t.size)]
    labels = [ColumnLabel("const", "const", 0, "const", "alpha")]

    if form == "levels":
        response = y[t]
        for i in range(1, spec.p + 1):
            cols.append(y[t - i])
            labels.append(ColumnLabel(dep, "dependent", i, "level", f"phi_{i}"))
        for role in panel.regressor_roles:
            x = panel.values(role)
            sym = SYMBOLS[role]
            for j in range(spec.q[role] + 1):
                cols.append(x[t - j])
                labels.append(ColumnLabel(panel.name_of(role), role, j, "level", f"{sym}_{j}"))
    else:
        response = y[t] - y[t - 1]
        for role in panel.roles:
            cols.append(panel.values(role)[t - 1])
            labels.append(
                ColumnLabel(panel.name_of(role), role, 1, "level", _level_symbol(role))
            )
        for role in panel.roles:
            x = panel.values(role)
            sym = SYMBOLS[role]
            for j in spec.ecm_diff_lags(role):
                cols.append(x[t - j] - x[t - j - 1])
                labels.append(ColumnLabel(panel.name_of(role), role, j, "diff", f"{sym}_{j}"))

    X = np.column_stack(cols)
    if t.size <= X.shape[1] or n <= lag0 + 2:
        raise DataError(
            f"insufficient observations: {t.size} rows after dropping {lag0} "
            f"leading lags for {X.shape[1]} columns"
        )
    response = np.array(response, dtype=float)
    response.setflags(write=False)
    X.setflags(write=False)
    dates = np.array(panel.dates[t])
    dates.setflags(write=False)
    return LagDesign(response, X, tuple(labels), dates, form, spec)

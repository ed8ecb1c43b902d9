"""
Declarative run configuration.

A run is described by one JSON file; command-line flags override single
fields.  ``RunConfig.to_dict`` and ``RunConfig.from_dict`` are exact
inverses, and unknown keys are rejected rather than ignored.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .design import ModelSpec
from .errors import ConfigError, QardlError
from .quantile_ardl import DEFAULT_QUANTILES
from .series import ROLES, AlignedPanel, align_panel, ingest_csv, log_transform, trim_leading_nonpositive
from .simulate import DgpSpec, ErrorSpec, RegressorProcess

__all__ = ["LagConfig", "SimulationConfig", "RunConfig", "load_config", "load_panel"]

SE_METHODS = ("kernel", "bootstrap")
STAR_LEVELS = (0.01, 0.05, 0.10)


def _reject_unknown(d, allowed, where):
    extra = sorted(set(d) - set(allowed))
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {extra}")


@dataclass(frozen=True)
class LagConfig:
    """Either a pinned ``spec`` or the bounds of an information-criterion search."""

    spec: ModelSpec | None = None
    max_p: int = 4
    max_q: int = 2
    criterion: str = "bic"

    def __post_init__(self):
        if self.criterion not in ("aic", "bic"):
            raise ConfigError(f"criterion must be 'aic' or 'bic', got {self.criterion!r}")
        if self.max_p < 1 or self.max_q < 0:
            raise ConfigError("selection bounds need max_p >= 1 and max_q >= 0")

    def to_dict(self) -> dict:
        if self.spec is not None:
            return {"pinned": self.spec.to_dict()}
        return {"select": {"max_p": self.max_p, "max_q": self.max_q, "criterion": self.criterion}}

    @classmethod
    def from_dict(cls, d) -> "LagConfig":
        _reject_unknown(d, ("pinned", "select"), "lags")
        if ("pinned" in d) == ("select" in d):
            raise ConfigError("lags needs exactly one of 'pinned' or 'select'")
        if "pinned" in d:
            try:
                return cls(spec=ModelSpec.from_dict(d["pinned"]))
            except (QardlError, ValueError, TypeError, KeyError) as exc:
                raise ConfigError(f"invalid pinned lag spec: {exc}") from None
        s = d["select"]
        _reject_unknown(s, ("max_p", "max_q", "criterion"), "lags.select")
        return cls(None, int(s.get("max_p", 4)), int(s.get("max_q", 2)), s.get("criterion", "bic"))


@dataclass(frozen=True)
class SimulationConfig:
    """DGP and study settings for the ``simulate`` command."""

    dgp: dict
    replications: int = 200
    estimator: str = "ardl"
    quantiles: tuple = (0.5,)
    n_jobs: int = 1

    def __post_init__(self):
        if self.estimator not in ("ardl", "qardl"):
            raise ConfigError(f"simulation estimator must be 'ardl' or 'qardl', got {self.estimator!r}")
        if self.replications < 2:
            raise ConfigError("need at least 2 replications")

    def dgp_spec(self, seed: int) -> DgpSpec:
        d = dict(self.dgp)
        _reject_unknown(
            d,
            ("rho", "long_run", "alpha", "phi", "short_run", "error", "regressors", "names", "n", "burn_in"),
            "simulation.dgp",
        )
        try:
            if "error" in d:
                d["error"] = ErrorSpec(**d["error"])
            if "regressors" in d:
                d["regressors"] = {r: RegressorProcess(**p) for r, p in d["regressors"].items()}
            if "phi" in d:
                d["phi"] = tuple(d["phi"])
            if "short_run" in d:
                d["short_run"] = {r: tuple(v) for r, v in d["short_run"].items()}
            return DgpSpec(seed=seed, **d)
        except TypeError as exc:
            raise ConfigError(f"invalid DGP: {exc}") from None

    def to_dict(self) -> dict:
        return {
            "dgp": self.dgp,
            "replications": self.replications,
            "estimator": self.estimator,
            "quantiles": list(self.quantiles),
            "n_jobs": self.n_jobs,
        }

    @classmethod
    def from_dict(cls, d) -> "SimulationConfig":
        _reject_unknown(d, ("dgp", "replications", "estimator", "quantiles", "n_jobs"), "simulation")
        if "dgp" not in d:
            raise ConfigError("simulation needs a 'dgp' section")
        return cls(
            dgp=d["dgp"],
            replications=int(d.get("replications", 200)),
            estimator=d.get("estimator", "ardl"),
            quantiles=tuple(float(g) for g in d.get("quantiles", (0.5,))),
            n_jobs=int(d.get("n_jobs", 1)),
        )


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs besides the input files.

    ``variables`` maps CSV column names to roles; ``log`` lists the columns
    to log-transform; ``trim_nonpositive`` lists columns whose leading
    non-positive observations are dropped before logging.
    """

    input: str | None = None
    date_column: str = "date"
    variables: dict = field(default_factory=dict)
    log: tuple = ()
    trim_nonpositive: tuple = ()
    lags: LagConfig = field(default_factory=LagConfig)
    quantiles: tuple = DEFAULT_QUANTILES
    out: str = "out"
    seed: int = 0
    se: str = "kernel"
    n_boot: int = 500
    projection: str = "joint"
    deterministic: str = "constant"
    band_level: float = 0.95
    significance_levels: tuple = STAR_LEVELS
    n_jobs: int = 1
    simulation: SimulationConfig | None = None

    def __post_init__(self):
        roles = list(self.variables.values())
        for r in roles:
            if r not in ROLES:
                raise ConfigError(f"unknown role {r!r}; expected one of {ROLES}")
        if len(set(roles)) != len(roles):
            raise ConfigError("each role may be mapped to only one variable")
        if self.variables and roles.count("dependent") != 1:
            raise ConfigError("exactly one variable must have the 'dependent' role")
        for name in (*self.log, *self.trim_nonpositive):
            if name not in self.variables:
                raise ConfigError(f"{name!r} is not a configured variable")
        if not self.quantiles:
            raise ConfigError("quantile grid is empty")
        for g in self.quantiles:
            if not 0.0 < g < 1.0:
                raise ConfigError(f"quantile levels must lie in (0, 1), got {g!r}")
        if self.se not in SE_METHODS:
            raise ConfigError(f"se must be one of {SE_METHODS}, got {self.se!r}")
        if self.projection not in ("joint", "two-stage"):
            raise ConfigError(f"projection must be 'joint' or 'two-stage', got {self.projection!r}")
        if self.deterministic not in ("none", "constant", "constant+trend"):
            raise ConfigError(f"unknown deterministic term {self.deterministic!r}")
        if not 0.0 < self.band_level < 1.0:
            raise ConfigError("band_level must lie in (0, 1)")
        if tuple(self.significance_levels) != STAR_LEVELS:
            raise ConfigError("only the 1%/5%/10% star convention is supported")
        if self.n_boot < 2:
            raise ConfigError("n_boot must be at least 2")
        if self.lags.spec is not None:
            mapped = {r for r in roles if r != "dependent"}
            if self.variables and set(self.lags.spec.roles) != mapped:
                raise ConfigError(
                    f"pinned lag spec covers {sorted(self.lags.spec.roles)} "
                    f"but the regressors are {sorted(mapped)}"
                )

    @property
    def role_to_variable(self) -> dict:
        return {r: v for v, r in self.variables.items()}

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "date_column": self.date_column,
            "variables": dict(self.variables),
            "log": list(self.log),
            "trim_nonpositive": list(self.trim_nonpositive),
            "lags": self.lags.to_dict(),
            "quantiles": list(self.quantiles),
            "out": self.out,
            "seed": self.seed,
            "se": self.se,
            "n_boot": self.n_boot,
            "projection": self.projection,
            "deterministic": self.deterministic,
            "band_level": self.band_level,
            "significance_levels": list(self.significance_levels),
            "n_jobs": self.n_jobs,
            "simulation": self.simulation.to_dict() if self.simulation else None,
        }

    @classmethod
    def from_dict(cls, d) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        names = [f.name for f in dataclasses.fields(cls)]
        _reject_unknown(d, names, "config")
        kw = dict(d)
        try:
            if "lags" in kw:
                kw["lags"] = LagConfig.from_dict(kw["lags"])
            if kw.get("simulation") is not None:
                kw["simulation"] = SimulationConfig.from_dict(kw["simulation"])
            for key in ("log", "trim_nonpositive"):
                if key in kw:
                    kw[key] = tuple(kw[key])
            for key in ("quantiles", "significance_levels"):
                if key in kw:
                    kw[key] = tuple(float(x) for x in kw[key])
            return cls(**kw)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, QardlError):
                raise
            raise ConfigError(f"invalid config: {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def load_config(path) -> RunConfig:
    """Read a JSON config; a relative ``input`` is resolved against the config's folder."""
    p = Path(path)
    try:
        with open(p, encoding="utf-8") as fh:
            d = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {p} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
    cfg = RunConfig.from_dict(d)
    if cfg.input is not None and not Path(cfg.input).is_absolute():
        cfg = dataclasses.replace(cfg, input=str(p.parent / cfg.input))
    return cfg


def load_panel(cfg: RunConfig) -> AlignedPanel:
    """Ingest, transform and align the configured variables."""
    if cfg.input is None:
        raise ConfigError("config has no 'input' file")
    if not cfg.variables:
        raise ConfigError("config maps no variables")
    series = ingest_csv(cfg.input, cfg.date_column, list(cfg.variables))
    out = []
    for s in series:
        if s.name in cfg.trim_nonpositive:
            s = trim_leading_nonpositive(s)
        if s.name in cfg.log:
            s = log_transform(s)
        out.append(s)
    return align_panel(out, cfg.role_to_variable)

"""
Linear and quantile ARDL error-correction models for aligned daily panels.

The pipeline runs from CSV ingestion and alignment (``series``), through
descriptive statistics and unit-root tests (``diagnostics``), to OLS and
quantile error-correction fits (``ardl``, ``quantile_ardl``) with
long-run and cumulative short-run effects.  ``simulate`` generates panels
from a known process for recovery studies; ``cli`` wires it together.
"""

__version__ = "0.1.0"

from .ardl import ArdlFit, EcmFit, fit_linear_ardl, select_lags, to_ecm
from .design import ModelSpec, build_lag_design
from .diagnostics import adf_test, describe, jarque_bera, pp_test
from .errors import (
    ConfigError,
    ConvergenceError,
    DataError,
    EstimationError,
    QardlError,
    RankDeficiencyError,
)
from .estimates import Estimate
from .quantile_ardl import QardlFitSet, confidence_bands, fit_qardl
from .regression import delta_method, ols_fit, quantile_fit
from .series import AlignedPanel, ObservationSeries, align_panel, ingest_csv, log_transform
from .simulate import DgpSpec, ErrorSpec, RegressorProcess, run_recovery_study, simulate_panel

__all__ = [
    "AlignedPanel",
    "ArdlFit",
    "ConfigError",
    "ConvergenceError",
    "DataError",
    "DgpSpec",
    "EcmFit",
    "ErrorSpec",
    "Estimate",
    "EstimationError",
    "ModelSpec",
    "ObservationSeries",
    "QardlError",
    "QardlFitSet",
    "RankDeficiencyError",
    "RegressorProcess",
    "adf_test",
    "align_panel",
    "build_lag_design",
    "confidence_bands",
    "delta_method",
    "describe",
    "fit_linear_ardl",
    "fit_qardl",
    "ingest_csv",
    "jarque_bera",
    "log_transform",
    "ols_fit",
    "pp_test",
    "quantile_fit",
    "run_recovery_study",
    "select_lags",
    "simulate_panel",
    "to_ecm",
]

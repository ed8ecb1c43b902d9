"""
Command-line entry point.

Every command reads a JSON config (``--config``), applies flag overrides,
writes its artifacts to the output directory and echoes the text table to
stdout.  Failures print one JSON record per line on stderr and exit with
2 (configuration), 3 (data) or 4 (estimation).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import __version__
from .ardl import fit_linear_ardl, select_lags, to_ecm
from .config import RunConfig, load_config, load_panel
from .diagnostics import adf_test, describe, unit_root_table_row
from .errors import ConfigError, DataError, EstimationError, QardlError
from .quantile_ardl import confidence_bands, fit_qardl
from .report import (
    describe_document,
    fit_document,
    load_document,
    render,
    study_document,
    unitroot_document,
    write_artifacts,
)
from .series import first_difference
from .simulate import run_recovery_study

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_ESTIMATION = 0, 2, 3, 4


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def _warn(message: str) -> None:
    _emit({"level": "warning", "message": message})


def _quantile_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _config(args) -> RunConfig:
    if args.config is None:
        raise ConfigError(f"'{args.command}' needs --config")
    cfg = load_config(args.config)
    return cfg.replace(
        seed=args.seed,
        quantiles=args.quantiles,
        se=args.se,
        out=args.out,
        deterministic="constant+trend" if args.trend else None,
    )


def _finish(doc: dict, cfg_out: str) -> None:
    paths = write_artifacts(doc, cfg_out)
    for p in paths:
        if p.suffix == ".txt":
            sys.stdout.write(p.read_text(encoding="utf-8"))


def cmd_describe(cfg: RunConfig) -> dict:
    panel = load_panel(cfg)
    return describe_document([describe(s) for s in panel.to_series()])


def cmd_unitroot(cfg: RunConfig) -> dict:
    panel = load_panel(cfg)
    rows = {s.name: unit_root_table_row(s, cfg.deterministic) for s in panel.to_series()}
    return unitroot_document(rows, cfg.deterministic)


def _check_stationarity(panel, deterministic) -> None:
    for s in panel.to_series():
        r = adf_test(first_difference(s), deterministic)
        if r.reject_at not in ("1%", "5%"):
            _warn(f"ADF does not reject a unit root in the first difference of {s.name} at 5%; "
                  "the series may be I(2)")


def cmd_fit(cfg: RunConfig, mode: str = "both", check_stationarity: bool = False) -> dict:
    """Linear ARDL (``mode="ardl"``), QARDL (``"qardl"``) or both on the configured panel."""
    panel = load_panel(cfg)
    if check_stationarity:
        _check_stationarity(panel, cfg.deterministic)
    lags = cfg.lags
    if lags.spec is not None:
        spec, how = lags.spec, "pinned"
    else:
        spec, how = select_lags(panel, lags.max_p, lags.max_q, lags.criterion), f"selected by {lags.criterion}"
    linear = quantile = None
    bands = None
    if mode in ("ardl", "both"):
        linear = to_ecm(fit_linear_ardl(panel, spec))
    if mode in ("qardl", "both"):
        quantile = fit_qardl(
            panel, spec, cfg.quantiles, se=cfg.se, n_boot=cfg.n_boot, seed=cfg.seed,
            projection=cfg.projection, n_jobs=cfg.n_jobs,
        )
        if not quantile.records:
            raise EstimationError(f"every quantile fit failed: {quantile.failures}")
        bands = confidence_bands(quantile, cfg.band_level)
    meta = {
        "lag_spec": how,
        "sample_start": str(panel.dates[0]),
        "sample_end": str(panel.dates[-1]),
        "panel_length": len(panel),
        "seed": cfg.seed,
        "band_level": cfg.band_level,
    }
    return fit_document(spec, panel.role_map(), linear, quantile, bands, meta)


def cmd_simulate(cfg: RunConfig) -> dict:
    sim = cfg.simulation
    if sim is None:
        raise ConfigError("config has no 'simulation' section")
    dgp = sim.dgp_spec(cfg.seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = run_recovery_study(dgp, sim.replications, sim.estimator, sim.quantiles, cfg.band_level, sim.n_jobs)
    for w in caught:
        _warn(str(w.message))
    return study_document(report, {**sim.to_dict()["dgp"], "seed": cfg.seed})


def cmd_report(path, out=None) -> None:
    doc = load_document(path)
    try:
        files = render(doc)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if out is not None:
        write_artifacts(doc, out)
    for name, text in files.items():
        if name.endswith(".txt"):
            sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--seed", type=int, help="master seed (overrides config)")
    common.add_argument("--quantiles", type=_quantile_list, help="comma-separated quantile levels")
    common.add_argument("--trend", action="store_true", help="unit-root tests with constant and trend")
    common.add_argument("--se", choices=("kernel", "bootstrap"), help="QARDL standard errors")
    common.add_argument("--out", help="output directory (overrides config)")

    parser = argparse.ArgumentParser(prog="qardl", description="Linear and quantile ARDL error-correction models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("describe", parents=[common], help="descriptive statistics")
    sub.add_parser("unitroot", parents=[common], help="ADF and PP tests on levels and differences")
    for name, text in (("fit-ardl", "linear ARDL"), ("fit-qardl", "quantile ARDL"), ("fit", "linear and quantile ARDL")):
        p = sub.add_parser(name, parents=[common], help=f"{text} in error-correction form")
        p.add_argument("--check-stationarity", action="store_true",
                       help="warn when a differenced series looks non-stationary")
    sub.add_parser("simulate", parents=[common], help="Monte-Carlo recovery study")
    p = sub.add_parser("report", help="re-render the artifacts of a saved JSON document")
    p.add_argument("document", help="describe/unitroot/fit/study JSON document")
    p.add_argument("--out", help="write the artifacts here as well")
    return parser


def _error_record(exc: Exception, code: int) -> dict:
    rec = {"level": "error", "error": type(exc).__name__, "exit_code": code, "message": str(exc)}
    for attr in ("path", "line"):
        v = getattr(exc, attr, None)
        if v is not None:
            rec[attr] = str(v) if attr == "path" else v
    return rec


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "report":
            cmd_report(args.document, args.out)
            return EXIT_OK
        cfg = _config(args)
        if args.command == "describe":
            doc = cmd_describe(cfg)
        elif args.command == "unitroot":
            doc = cmd_unitroot(cfg)
        elif args.command == "simulate":
            doc = cmd_simulate(cfg)
        else:
            mode = {"fit-ardl": "ardl", "fit-qardl": "qardl", "fit": "both"}[args.command]
            doc = cmd_fit(cfg, mode, args.check_stationarity)
        _finish(doc, cfg.out)
        return EXIT_OK
    except ConfigError as exc:
        err, code = exc, EXIT_CONFIG
    except DataError as exc:
        err, code = exc, EXIT_DATA
    except QardlError as exc:
        err, code = exc, EXIT_ESTIMATION
    except OSError as exc:
        err, code = DataError(f"{exc.strerror}: {exc.filename}"), EXIT_DATA
    _emit(_error_record(err, code))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

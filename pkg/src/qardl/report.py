"""
Result documents and their renderings.

Every command builds one plain document (dicts, lists, floats, strings)
carrying a ``schema`` tag.  The JSON file is that document verbatim; text
tables (rounded to 4 decimals, significance stars, standard errors in
parentheses on the row beneath) and RFC-4180 CSV (full precision) are pure
functions of it, so ``render`` can regenerate every artifact from a saved
JSON file.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .errors import DataError
from .estimates import Estimate

__all__ = [
    "SCHEMA_VERSION",
    "fmt",
    "text_table",
    "csv_text",
    "json_text",
    "describe_document",
    "unitroot_document",
    "fit_document",
    "study_document",
    "render",
    "write_artifacts",
    "load_document",
]

SCHEMA_VERSION = 1
KINDS = ("describe", "unitroot", "fit", "study")
UNIT_ROOT_COLUMNS = ("ADF(level)", "ADF(diff)", "PP(level)", "PP(diff)")


def fmt(x, decimals: int = 4) -> str:
    """Fixed-point text with ``-0.0000`` folded to ``0.0000``; NaN as ``NA``."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    s = f"{x:.{decimals}f}"
    if s.startswith("-") and float(s) == 0.0:
        s = s[1:]
    return s


def _clean(x):
    # JSON has no NaN or infinity
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _num(x):
    return math.nan if x is None else x


def text_table(header, rows, title: str | None = None) -> str:
    """Aligned UTF-8 table: first column left-aligned, the rest right-aligned."""
    cells = [list(map(str, header))] + [list(map(str, r)) for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]

    def line(r):
        parts = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        return "  ".join(parts).rstrip()

    rule = "-" * (sum(widths) + 2 * (len(widths) - 1))
    out = []
    if title:
        out.append(title)
    out += [rule, line(cells[0]), rule]
    out += [line(r) for r in cells[1:]]
    out.append(rule)
    return "\n".join(out) + "\n"


def _csv_cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else ""
    return str(x)


def csv_text(header, rows) -> str:
    """RFC-4180 CSV (CRLF line ends, minimal quoting); floats use ``repr``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_cell(x) for x in r])
    return buf.getvalue()


def json_text(doc: dict) -> str:
    return json.dumps(_clean(doc), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _head(kind: str) -> dict:
    return {"schema": f"qardl.{kind}/{SCHEMA_VERSION}", "kind": kind}


# -- documents ---------------------------------------------------------------


def describe_document(stats) -> dict:
    """Document for a list of ``DescriptiveStats``."""
    doc = _head("describe")
    doc["rows"] = [
        {
            "variable": s.name,
            "n": s.n,
            "minimum": s.minimum,
            "maximum": s.maximum,
            "mean": s.mean,
            "std_dev": s.std_dev,
            "skewness": s.skewness,
            "excess_kurtosis": s.excess_kurtosis,
            "jarque_bera": s.jarque_bera,
            "jb_p_value": s.jb_p_value,
            "jb_stars": s.jb_stars,
        }
        for s in stats
    ]
    return doc


def unitroot_document(rows: dict, deterministic: str) -> dict:
    """Document for ``{variable: unit_root_table_row(...)}``."""
    doc = _head("unitroot")
    doc["deterministic"] = deterministic
    doc["rows"] = []
    for var, tests in rows.items():
        entry = {"variable": var}
        for col in UNIT_ROOT_COLUMNS:
            r = tests[col]
            entry[col] = {
                "test": r.test,
                "statistic": r.statistic,
                "p_value": r.p_value,
                "lag_or_bandwidth": r.lag_or_bandwidth,
                "nobs": r.nobs,
                "critical_values": dict(r.critical_values),
                "stars": r.stars,
            }
        doc["rows"].append(entry)
    return doc


def _estimate_dict(e: Estimate) -> dict:
    return {
        "estimate": e.value,
        "std_error": e.std_error,
        "z": e.z,
        "p_value": e.p_value,
        "stars": e.stars,
    }


def _record(fit) -> dict:
    return {
        "method": fit.method,
        "gamma": fit.quantile,
        "nobs": int(fit.design.nobs),
        "adjustment_speed_pct": fit.adjustment_speed,
        "error_correcting": bool(fit.error_correcting),
        "parameters": {k: _estimate_dict(v) for k, v in fit.parameters().items()},
        "projection": {k: _estimate_dict(v) for k, v in fit.projection.items()},
        "warnings": list(fit.warnings),
    }


def fit_document(spec, names: dict, linear=None, quantile=None, bands=None, meta=None) -> dict:
    """Document for a linear fit (``EcmFit``), a ``QardlFitSet`` or both."""
    doc = _head("fit")
    doc["spec"] = spec.to_dict()
    doc["names"] = dict(names)
    if meta:
        doc["meta"] = dict(meta)
    doc["linear"] = _record(linear) if linear is not None else None
    if quantile is not None:
        doc["se_method"] = quantile.se_method
        doc["projection"] = quantile.projection_mode
        doc["quantiles"] = [_record(r) for r in quantile]
        doc["failures"] = [{"gamma": g, "error": m} for g, m in quantile.failures.items()]
    else:
        doc["quantiles"] = []
        doc["failures"] = []
    doc["bands"] = [list(b) for b in bands] if bands else []
    return doc


def study_document(report, dgp_dict: dict | None = None) -> dict:
    doc = _head("study")
    doc["replications"] = report.replications
    doc["failures"] = report.failures
    doc["n"] = report.n
    doc["seed"] = report.seed
    doc["level"] = report.level
    if dgp_dict is not None:
        doc["dgp"] = dgp_dict
    doc["rows"] = [
        {
            "parameter": r.parameter,
            "truth": r.truth,
            "bias": r.bias,
            "rmse": r.rmse,
            "coverage": r.coverage,
            "estimator": r.estimator,
            "gamma": r.gamma,
            "mean": r.mean,
            "median": r.median,
            "replications": r.replications,
        }
        for r in report.rows
    ]
    return doc


# -- renderings ----------------------------------------------------------------


def _describe_render(doc):
    header = ["Variable", "Minimum", "Maximum", "Mean", "Std. Dev", "Skewness", "Kurtosis", "Jarque-Bera"]
    rows = [
        [r["variable"], fmt(r["minimum"]), fmt(r["maximum"]), fmt(r["mean"]), fmt(r["std_dev"]),
         fmt(r["skewness"]), fmt(r["excess_kurtosis"]), fmt(r["jarque_bera"]) + r["jb_stars"]]
        for r in doc["rows"]
    ]
    text = text_table(header, rows, "Descriptive statistics (kurtosis is excess kurtosis)")
    keys = ["variable", "n", "minimum", "maximum", "mean", "std_dev", "skewness",
            "excess_kurtosis", "jarque_bera", "jb_p_value", "jb_stars"]
    return {"describe.txt": text, "describe.csv": csv_text(keys, [[r[k] for k in keys] for r in doc["rows"]])}


def _unitroot_render(doc):
    header = ["Variable", *UNIT_ROOT_COLUMNS]
    rows = [[r["variable"]] + [fmt(r[c]["statistic"]) + r[c]["stars"] for c in UNIT_ROOT_COLUMNS]
            for r in doc["rows"]]
    title = (f"Unit-root tests ({doc['deterministic']}); ADF t statistic, PP Z_rho; "
             "*** 1%, ** 5%, * 10% rejection of a unit root")
    keys = ["variable", "column", "test", "statistic", "p_value", "lag_or_bandwidth", "nobs",
            "cv_1%", "cv_5%", "cv_10%", "stars"]
    out = []
    for r in doc["rows"]:
        for c in UNIT_ROOT_COLUMNS:
            t = r[c]
            cv = t["critical_values"]
            out.append([r["variable"], c, t["test"], t["statistic"], t["p_value"], t["lag_or_bandwidth"],
                        t["nobs"], cv["1%"], cv["5%"], cv["10%"], t["stars"]])
    return {"unitroot.txt": text_table(header, rows, title), "unitroot.csv": csv_text(keys, out)}


def _model_label(rec):
    return "Linear ARDL" if rec["gamma"] is None else f"{rec['gamma']:g}"


def _fit_render(doc):
    records = ([doc["linear"]] if doc["linear"] else []) + list(doc["quantiles"])
    params: list[str] = []
    for rec in records:
        for p in rec["parameters"]:
            if p not in params:
                params.append(p)
    main = [p for p in params if not p.endswith("*") or p == "rho*"]
    cumul = [p for p in params if p.endswith("*") and p != "rho*"]

    def block(cols, title):
        rows = []
        for rec in records:
            est, se = [_model_label(rec)], [""]
            for p in cols:
                e = rec["parameters"].get(p)
                if e is None:
                    est.append("")
                    se.append("")
                else:
                    est.append(fmt(_num(e["estimate"])) + (e["stars"] or ""))
                    se.append(f"({fmt(_num(e['std_error']))})")
            rows += [est, se]
        return text_table(["Model", *cols], rows, title)

    text = block(main, "Error-correction estimates; standard errors in parentheses")
    if cumul:
        text += "\n" + block(cumul, "Cumulative short-run effects")
    notes = []
    for rec in records:
        for w in rec["warnings"]:
            notes.append(f"[{_model_label(rec)}] {w}")
    for f in doc["failures"]:
        notes.append(f"[{f['gamma']:g}] fit failed: {f['error']}")
    if notes:
        text += "\nNotes\n" + "".join(f"  {n}\n" for n in notes)

    keys = ["model", "gamma", "parameter", "estimate", "std_error", "z", "p_value", "stars"]
    out = []
    for rec in records:
        for p, e in rec["parameters"].items():
            out.append([rec["method"], rec["gamma"], p, _num(e["estimate"]), _num(e["std_error"]),
                        _num(e["z"]), _num(e["p_value"]), e["stars"]])
    files = {"fit.txt": text, "fit.csv": csv_text(keys, out)}
    if doc["bands"]:
        files["bands.csv"] = csv_text(["parameter", "gamma", "lo", "est", "hi"],
                                      [[b[0], b[1], _num(b[2]), _num(b[3]), _num(b[4])] for b in doc["bands"]])
    return files


def _study_render(doc):
    keys = ["parameter", "truth", "bias", "rmse", "coverage", "estimator", "gamma", "mean", "median", "replications"]
    header = ["Parameter", "Gamma", "Truth", "Mean", "Median", "Bias", "RMSE", "Coverage"]
    rows = [[r["parameter"], "" if r["gamma"] is None else f"{r['gamma']:g}", fmt(r["truth"]), fmt(r["mean"]),
             fmt(r["median"]), fmt(r["bias"]), fmt(r["rmse"]), fmt(r["coverage"])] for r in doc["rows"]]
    title = (f"Recovery study: {doc['replications']} replications, n={doc['n']}, "
             f"{doc['failures']} failed, nominal coverage {doc['level']:g}")
    return {
        "study.txt": text_table(header, rows, title),
        "study.csv": csv_text(keys, [[r[k] for k in keys] for r in doc["rows"]]),
    }


_RENDERERS = {"describe": _describe_render, "unitroot": _unitroot_render, "fit": _fit_render, "study": _study_render}


def render(doc: dict) -> dict:
    """``{filename: text}`` for every artifact of a document, JSON included."""
    kind = doc.get("kind")
    schema = doc.get("schema", "")
    if kind not in _RENDERERS or schema != f"qardl.{kind}/{SCHEMA_VERSION}":
        raise ValueError(f"unsupported document schema {schema!r}")
    files = {f"{kind}.json": json_text(doc)}
    files.update(_RENDERERS[kind](json.loads(files[f"{kind}.json"])))
    return files


def write_artifacts(doc: dict, out_dir) -> list[Path]:
    """Write all renderings of ``doc`` into ``out_dir``; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in render(doc).items():
        p = out / name
        with open(p, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        paths.append(p)
    return paths


def load_document(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"not a JSON document: {exc.msg}", str(path), exc.lineno) from None

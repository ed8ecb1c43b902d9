"""
Daily observation series, CSV ingestion and panel alignment.

Series are immutable: the underlying numpy arrays are flagged read-only
at construction and every transform returns a new object.
"""

from __future__ import annotations

import csv
import datetime as _dt
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError

__all__ = [
    "ROLES",
    "REGRESSOR_ROLES",
    "ObservationSeries",
    "PanelColumn",
    "AlignedPanel",
    "ingest_csv",
    "log_transform",
    "first_difference",
    "trim_leading_nonpositive",
    "align_panel",
]

# Canonical role order; regressors follow the order of the long-run terms.
ROLES = ("dependent", "epu", "sp500", "csi300", "interest", "panic")
REGRESSOR_ROLES = ROLES[1:]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _as_dates(dates) -> np.ndarray:
    return np.asarray(dates, dtype="datetime64[D]")


@dataclass(frozen=True, eq=False)
class ObservationSeries:
    """One named daily series.

    Parameters
    ----------
    name : str
        Identifier of the variable (e.g. ``"WTI"``).
    dates : array_like of datetime64[D]
        Strictly increasing calendar dates.
    values : array_like of float
        Finite observations aligned with ``dates``.
    """

    name: str
    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dates = _as_dates(self.dates).reshape(-1)
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if dates.shape != values.shape:
            raise DataError(
                f"series {self.name!r}: {dates.size} dates but {values.size} values"
            )
        if dates.size > 1:
            steps = np.diff(dates).astype(np.int64)
            if np.any(steps == 0):
                dup = dates[1:][steps == 0][0]
                raise DataError(f"series {self.name!r}: duplicate date {dup}")
            if np.any(steps < 0):
                raise DataError(f"series {self.name!r}: dates are not increasing")
        if not np.all(np.isfinite(values)):
            raise DataError(f"series {self.name!r}: non-finite values")
        object.__setattr__(self, "dates", _frozen(dates))
        object.__setattr__(self, "values", _frozen(values))

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, ObservationSeries):
            return NotImplemented
        return (
            self.name == other.name
            and np.array_equal(self.dates, other.dates)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.name, self.values.tobytes(), self.dates.tobytes()))

    def rename(self, name: str) -> "ObservationSeries":
        return ObservationSeries(name, self.dates, self.values)


def _parse_date(text: str, path: str, line: int) -> np.datetime64:
    try:
        return np.datetime64(_dt.date.fromisoformat(text.strip()), "D")
    except ValueError:
        raise DataError(f"unparseable date {text!r}", path, line) from None


def _parse_value(text: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    try:
        v = float(text)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def ingest_csv(
    path, date_column: str, value_columns: Sequence[str] | None = None
) -> list[ObservationSeries]:
    """Read one series per value column from a CSV file.

    Empty or unparseable cells are treated as missing and the row is dropped
    from that column's series only.  Rows are sorted by date.  A date that
    occurs twice with a value in the same column is rejected.

    Parameters
    ----------
    path : str or path-like
        UTF-8 CSV with a header row.
    date_column : str
        Header of the ISO-8601 (``YYYY-MM-DD``) date column.
    value_columns : sequence of str, optional
        Columns to read.  Defaults to every column except the date column.

    Returns
    -------
    list of ObservationSeries
        In the order of ``value_columns``.
    """
    path = str(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read file: {exc.strerror}", path) from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty file", path) from None
        except (csv.Error, UnicodeDecodeError) as exc:
            raise DataError(f"unreadable CSV: {exc}", path, 1) from None
        header = [h.strip() for h in header]
        if date_column not in header:
            raise DataError(f"date column {date_column!r} not in header", path, 1)
        if value_columns is None:
            value_columns = [h for h in header if h != date_column]
        missing = [c for c in value_columns if c not in header]
        if missing:
            raise DataError(f"columns not in header: {missing}", path, 1)
        di = header.index(date_column)
        idx = [header.index(c) for c in value_columns]
        cells: dict[str, dict] = {c: {} for c in value_columns}
        try:
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) < len(header):
                    row = row + [""] * (len(header) - len(row))
                d = _parse_date(row[di], path, lineno)
                for col, j in zip(value_columns, idx):
                    v = _parse_value(row[j])
                    if v is None:
                        continue
                    if d in cells[col]:
                        raise DataError(
                            f"duplicate date {d} in column {col!r}", path, lineno
                        )
                    cells[col][d] = v
        except (csv.Error, UnicodeDecodeError) as exc:
            raise DataError(f"unreadable CSV: {exc}", path) from None

    out = []
    for col in value_columns:
        items = sorted(cells[col].items())
        dates = np.array([d for d, _ in items], dtype="datetime64[D]")
        values = np.array([v for _, v in items], dtype=float)
        out.append(ObservationSeries(col, dates, values))
    return out


def log_transform(s: ObservationSeries) -> ObservationSeries:
    """Natural logarithm of a strictly positive series."""
    bad = np.flatnonzero(s.values <= 0)
    if bad.size:
        i = bad[0]
        raise DataError(
            f"series {s.name!r}: non-positive value {s.values[i]!r} on {s.dates[i]} "
            "cannot be logged"
        )
    return ObservationSeries(s.name, s.dates, np.log(s.values))


def first_difference(s: ObservationSeries) -> ObservationSeries:
    """Differences ``x[i+1] - x[i]`` stamped with the later date."""
    if len(s) < 2:
        raise DataError(f"series {s.name!r}: need at least 2 observations to difference")
    return ObservationSeries(s.name, s.dates[1:], np.diff(s.values))


def trim_leading_nonpositive(s: ObservationSeries) -> ObservationSeries:
    """Drop observations before the first strictly positive value.

    Used for indices such as a news panic count that are zero before the
    first reported case; later non-positive values are left untouched so
    that ``log_transform`` still refuses them.
    """
    pos = np.flatnonzero(s.values > 0)
    if pos.size == 0:
        raise DataError(f"series {s.name!r}: no strictly positive values")
    return ObservationSeries(s.name, s.dates[pos[0]:], s.values[pos[0]:])


@dataclass(frozen=True)
class PanelColumn:
    name: str
    role: str
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class AlignedPanel:
    """Date-intersected matrix of model variables.

    Columns are stored in canonical role order with the dependent variable
    first.
    """

    dates: np.ndarray
    columns: tuple[PanelColumn, ...] = field(default_factory=tuple)

    def __post_init__(self):
        dates = _frozen(_as_dates(self.dates).reshape(-1))
        object.__setattr__(self, "dates", dates)
        cols = []
        seen = set()
        for c in self.columns:
            if c.role not in ROLES:
                raise DataError(f"unknown role {c.role!r}")
            if c.role in seen:
                raise DataError(f"role {c.role!r} appears more than once")
            seen.add(c.role)
            v = np.asarray(c.values, dtype=float).reshape(-1)
            if v.size != dates.size:
                raise DataError(f"column {c.name!r} length differs from date index")
            cols.append(PanelColumn(c.name, c.role, _frozen(v)))
        if "dependent" not in seen:
            raise DataError("panel has no dependent column")
        cols.sort(key=lambda c: ROLES.index(c.role))
        object.__setattr__(self, "columns", tuple(cols))

    def __len__(self) -> int:
        return self.dates.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlignedPanel):
            return NotImplemented
        return (
            np.array_equal(self.dates, other.dates)
            and len(self.columns) == len(other.columns)
            and all(
                a.name == b.name and a.role == b.role and np.array_equal(a.values, b.values)
                for a, b in zip(self.columns, other.columns)
            )
        )

    @property
    def roles(self) -> tuple[str, ...]:
        return tuple(c.role for c in self.columns)

    @property
    def regressor_roles(self) -> tuple[str, ...]:
        return tuple(r for r in self.roles if r != "dependent")

    def column(self, role: str) -> PanelColumn:
        for c in self.columns:
            if c.role == role:
                return c
        raise KeyError(role)

    def name_of(self, role: str) -> str:
        return self.column(role).name

    def values(self, role: str) -> np.ndarray:
        return self.column(role).values

    def to_series(self) -> list[ObservationSeries]:
        return [ObservationSeries(c.name, self.dates, c.values) for c in self.columns]

    def role_map(self) -> dict[str, str]:
        return {c.role: c.name for c in self.columns}


def align_panel(
    series: Iterable[ObservationSeries], roles: Mapping[str, str]
) -> AlignedPanel:
    """Restrict the mapped series to their common dates.

    Parameters
    ----------
    series : iterable of ObservationSeries
        Candidate series; only those named in ``roles`` are used.
    roles : mapping
        ``role -> series name``.  Must contain ``"dependent"``.

    Returns
    -------
    AlignedPanel
    """
    by_name = {s.name: s for s in series}
    if "dependent" not in roles:
        raise DataError("no series mapped to the dependent role")
    for role, name in roles.items():
        if role not in ROLES:
            raise DataError(f"unknown role {role!r}; expected one of {ROLES}")
        if name not in by_name:
            raise DataError(f"role {role!r} refers to missing series {name!r}")
    chosen = [(role, by_name[roles[role]]) for role in ROLES if role in roles]
    common = chosen[0][1].dates
    for _, s in chosen[1:]:
        common = np.intersect1d(common, s.dates, assume_unique=True)
    if common.size == 0:
        raise DataError("series share no common dates")
    cols = []
    for role, s in chosen:
        keep = np.isin(s.dates, common, assume_unique=True)
        cols.append(PanelColumn(s.name, role, s.values[keep]))
    return AlignedPanel(common, tuple(cols))

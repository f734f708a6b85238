"""CSV ingestion for FRED-style series exports, and differencing.

Files are expected comma-separated with a header, a DATE column of
ISO-8601 dates and one value column; missing observations marked "."
(or empty) are dropped and counted, never interpolated.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass

import numpy as np

from varbreak.errors import CsvParseError, DateOrderError

MISSING_MARKERS = (".", "")


@dataclass(frozen=True, eq=False)
class SeriesFile:
    """An observed series with its dates and provenance.

    Dates are ISO-8601 strings, strictly increasing, and are never
    interpreted beyond ordering; ``frequency`` only informs the default
    AR order cap.
    """

    dates: tuple[str, ...]
    values: np.ndarray
    frequency: str = "unknown"
    source_id: str = ""
    dropped_missing: int = 0

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size != len(self.dates):
            raise ValueError(
                f"need one value per date, got {arr.size} values for {len(self.dates)} dates"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("series values contain NaN or infinite entries")
        if any(a >= b for a, b in zip(self.dates, self.dates[1:])):
            raise DateOrderError("dates are not strictly increasing")
        if self.frequency not in ("monthly", "quarterly", "unknown"):
            raise ValueError(f"unknown frequency {self.frequency!r}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)


def infer_frequency(dates: tuple[str, ...]) -> str:
    """Classify the median day gap: ~30 days monthly, ~91 quarterly."""
    if len(dates) < 3:
        return "unknown"
    ordinals = [datetime.date.fromisoformat(d).toordinal() for d in dates]
    gap = float(np.median(np.diff(ordinals)))
    if 28 <= gap <= 31:
        return "monthly"
    if 84 <= gap <= 96:
        return "quarterly"
    return "unknown"


def load_csv(
    path,
    *,
    date_column: str = "DATE",
    value_column: str | None = None,
    missing_markers: tuple[str, ...] = MISSING_MARKERS,
) -> SeriesFile:
    """Parse a FRED-style CSV export into a :class:`SeriesFile`.

    Parameters
    ----------
    path : str or os.PathLike
        CSV file with a header row.
    date_column : str
        Header name of the date column.
    value_column : str, optional
        Header name of the value column; defaults to the first column
        other than the date column, whose name becomes ``source_id``.
    missing_markers : tuple of str
        Cell contents treated as missing; such rows are dropped and
        counted in ``dropped_missing``.

    Raises
    ------
    CsvParseError
        For a missing or malformed header, or an unparseable row; the
        message carries the 1-based line number.
    DateOrderError
        If dates are not strictly increasing.
    """
    with open(path, newline="", encoding="utf-8-sig") as handle:
        reader = csv.reader(handle)
        try:
            header = [cell.strip() for cell in next(reader)]
        except StopIteration:
            raise CsvParseError("file is empty", line=1) from None
        if date_column not in header:
            raise CsvParseError(f"no {date_column!r} column in header {header}", line=1)
        date_idx = header.index(date_column)
        if value_column is None:
            candidates = [name for name in header if name != date_column]
            if not candidates:
                raise CsvParseError("no value column besides the date column", line=1)
            value_column = candidates[0]
        if value_column not in header:
            raise CsvParseError(f"no {value_column!r} column in header {header}", line=1)
        value_idx = header.index(value_column)

        dates: list[str] = []
        values: list[float] = []
        dropped = 0
        previous: datetime.date | None = None
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise CsvParseError(
                    f"expected {len(header)} fields, got {len(row)}", line=lineno
                )
            raw_date = row[date_idx].strip()
            try:
                parsed = datetime.date.fromisoformat(raw_date)
            except ValueError:
                raise CsvParseError(f"unparseable date {raw_date!r}", line=lineno) from None
            if previous is not None and parsed <= previous:
                raise DateOrderError(
                    f"line {lineno}: date {raw_date} does not increase past {previous.isoformat()}"
                )
            raw_value = row[value_idx].strip()
            if raw_value in missing_markers:
                dropped += 1
                previous = parsed
                continue
            try:
                value = float(raw_value)
            except ValueError:
                raise CsvParseError(f"unparseable value {raw_value!r}", line=lineno) from None
            if not np.isfinite(value):
                raise CsvParseError(f"non-finite value {raw_value!r}", line=lineno)
            dates.append(parsed.isoformat())
            values.append(value)
            previous = parsed

    return SeriesFile(
        dates=tuple(dates),
        values=np.array(values, dtype=np.float64),
        frequency=infer_frequency(tuple(dates)),
        source_id=value_column,
        dropped_missing=dropped,
    )


def difference(series: SeriesFile, order: int = 1) -> SeriesFile:
    """Apply first differences ``order`` times, shifting dates accordingly."""
    if order < 1:
        raise ValueError(f"difference order must be at least 1, got {order}")
    if series.n <= order:
        raise ValueError(f"series of length {series.n} is too short to difference {order} times")
    return SeriesFile(
        dates=series.dates[order:],
        values=np.diff(series.values, n=order),
        frequency=series.frequency,
        source_id=series.source_id,
        dropped_missing=series.dropped_missing,
    )

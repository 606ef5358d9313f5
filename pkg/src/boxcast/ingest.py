"""Reading monthly crime counts from CSV files.

Two layouts are accepted. The *wide* layout has a ``month`` column followed by
one column per borough::

    month,Barnet,Brent
    12-Jan,1240,2646
    12-Feb,,2376

The *long* (tidy) layout has exactly the columns ``month,borough,count``.
Month labels may be written ``YY-MMM`` (``12-Jan``), ``MMM-YY`` (``Jan-17``)
or ISO ``YYYY-MM``. Two-digit years are taken to be in the 2000s.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    DomainError,
    DuplicateError,
    InsufficientDataError,
    MonthFormatError,
    ParseError,
    StructuralError,
    UnknownBoroughError,
)

MONTH_ABBR = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
              "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")
_ABBR_INDEX = {name.lower(): i + 1 for i, name in enumerate(MONTH_ABBR)}

_ISO_RE = re.compile(r"^(\d{4})-(\d{1,2})$")
_YY_MMM_RE = re.compile(r"^(\d{2})-([A-Za-z]{3})$")
_MMM_YY_RE = re.compile(r"^([A-Za-z]{3})-(\d{2})$")

CENTURY = 2000


@dataclass(frozen=True, order=True)
class Month:
    """A calendar month. Supports ``month + n`` and ``month - other``."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise MonthFormatError(f"month of year out of range: {self.month}")

    @property
    def ordinal(self) -> int:
        return self.year * 12 + self.month - 1

    @classmethod
    def from_ordinal(cls, n: int) -> "Month":
        return cls(n // 12, n % 12 + 1)

    def __add__(self, n: int) -> "Month":
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        return Month.from_ordinal(self.ordinal + int(n))

    def __sub__(self, other):
        if isinstance(other, Month):
            return self.ordinal - other.ordinal
        if isinstance(other, (int, np.integer)):
            return Month.from_ordinal(self.ordinal - int(other))
        return NotImplemented

    def iso(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    def short(self) -> str:
        """``MMM-YY`` label, e.g. ``Jan-17``."""
        return f"{MONTH_ABBR[self.month - 1]}-{self.year % 100:02d}"

    def __str__(self):
        return self.iso()


def parse_month(label: str) -> Month:
    """Parse ``YYYY-MM``, ``YY-MMM`` or ``MMM-YY`` into a :class:`Month`."""
    text = label.strip()
    m = _ISO_RE.match(text)
    if m:
        month = int(m.group(2))
        if not 1 <= month <= 12:
            raise MonthFormatError(f"unrecognized month label {label!r}")
        return Month(int(m.group(1)), month)
    m = _YY_MMM_RE.match(text)
    if m and m.group(2).lower() in _ABBR_INDEX:
        return Month(CENTURY + int(m.group(1)), _ABBR_INDEX[m.group(2).lower()])
    m = _MMM_YY_RE.match(text)
    if m and m.group(1).lower() in _ABBR_INDEX:
        return Month(CENTURY + int(m.group(2)), _ABBR_INDEX[m.group(1).lower()])
    raise MonthFormatError(f"unrecognized month label {label!r}")


@dataclass(frozen=True)
class MonthlySeries:
    """Consecutive monthly counts for one borough, starting at ``start``."""

    name: str
    start: Month
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise InsufficientDataError(f"series {self.name!r} is empty")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise DomainError(f"series {self.name!r} must be finite and non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    @property
    def end(self) -> Month:
        return self.start + (len(self) - 1)

    @property
    def months(self) -> list[Month]:
        return [self.start + i for i in range(len(self))]

    def month_index(self, month: Month) -> int:
        return month - self.start

    def window(self, first: Month, last: Month) -> "MonthlySeries":
        """Sub-series covering ``first`` to ``last`` inclusive."""
        i, j = self.month_index(first), self.month_index(last)
        if i < 0 or j >= len(self) or j < i:
            raise InsufficientDataError(
                f"window {first}..{last} outside {self.start}..{self.end}")
        return MonthlySeries(self.name, first, self.values[i:j + 1])


@dataclass(frozen=True)
class RawTable:
    """Wide table before cleaning. ``None`` marks a missing cell.

    ``header`` holds the borough labels only; the month column is implicit.
    """

    header: tuple
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "header", tuple(self.header))
        rows = tuple((month, tuple(cells)) for month, cells in self.rows)
        for month, cells in rows:
            if len(cells) != len(self.header):
                raise StructuralError(
                    f"row {month} has {len(cells)} cells, header has {len(self.header)}")
        object.__setattr__(self, "rows", rows)

    def column(self, label: str) -> list:
        try:
            j = self.header.index(label)
        except ValueError:
            raise UnknownBoroughError([label]) from None
        return [cells[j] for _, cells in self.rows]


Source = Union[bytes, str]


def _text(content: Source) -> str:
    if isinstance(content, bytes):
        content = content.decode("utf-8-sig")
    elif content.startswith("﻿"):
        content = content[1:]
    return content


def _read_rows(content: Source) -> list[list[str]]:
    reader = csv.reader(io.StringIO(_text(content)))
    return [row for row in reader if any(cell.strip() for cell in row)]


def _parse_cell(cell: str, row: int, column: int) -> Optional[float]:
    text = cell.strip()
    if not text:
        return None
    try:
        value = float(text.replace(",", ""))
    except ValueError:
        raise ParseError(
            f"row {row} column {column}: not a number: {cell!r}", row, column) from None
    if not math.isfinite(value):
        raise ParseError(f"row {row} column {column}: non-finite value {cell!r}", row, column)
    return value


def parse_wide_csv(content: Source) -> RawTable:
    """Parse the wide layout into a :class:`RawTable`.

    Row numbers in error messages count data rows from 1 (the header is not
    counted); column numbers are 1-based with the month column as column 1.
    """
    lines = _read_rows(content)
    if not lines:
        raise StructuralError("empty file: missing header row")
    header = [cell.strip() for cell in lines[0]]
    if header[0].lower() != "month":
        raise StructuralError(f"first header cell must be 'month', got {header[0]!r}")
    boroughs = header[1:]
    rows = []
    for i, line in enumerate(lines[1:], start=1):
        if len(line) != len(header):
            raise StructuralError(
                f"row {i} has {len(line)} columns, header has {len(header)}")
        month = parse_month(line[0])
        cells = tuple(_parse_cell(c, i, j) for j, c in enumerate(line[1:], start=2))
        rows.append((month, cells))
    return RawTable(tuple(boroughs), tuple(rows))


def serialize_wide_csv(table: RawTable) -> str:
    """Inverse of :func:`parse_wide_csv`; months are written as ``YYYY-MM``."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["month", *table.header])
    for month, cells in table.rows:
        writer.writerow([month.iso(), *("" if c is None else repr(float(c)) for c in cells)])
    return out.getvalue()


@dataclass(frozen=True)
class CountRecord:
    month: Month
    borough: str
    count: float


LONG_HEADER = ("month", "borough", "count")


def parse_long_csv(content: Source) -> list[CountRecord]:
    lines = _read_rows(content)
    if not lines:
        raise StructuralError("empty file: missing header row")
    header = tuple(cell.strip().lower() for cell in lines[0])
    if header != LONG_HEADER:
        missing = [c for c in LONG_HEADER if c not in header]
        detail = f"missing column(s) {', '.join(missing)}" if missing else f"got {header}"
        raise StructuralError(f"long CSV header must be month,borough,count: {detail}")
    records = []
    seen = set()
    for i, line in enumerate(lines[1:], start=1):
        if len(line) != 3:
            raise StructuralError(f"row {i} has {len(line)} columns, expected 3")
        month = parse_month(line[0])
        borough = line[1].strip()
        count = _parse_cell(line[2], i, 3)
        if count is None:
            raise ParseError(f"row {i} column 3: empty count", i, 3)
        key = (month, borough)
        if key in seen:
            raise DuplicateError(f"row {i}: duplicate entry for {borough} {month}")
        seen.add(key)
        records.append(CountRecord(month, borough, count))
    return records


def records_to_table(records: Iterable[CountRecord]) -> RawTable:
    """Pivot long records into a wide table covering every month in range.

    Months absent for a borough become missing cells.
    """
    records = list(records)
    if not records:
        return RawTable((), ())
    boroughs = list(dict.fromkeys(r.borough for r in records))
    first = min(r.month for r in records)
    last = max(r.month for r in records)
    n = last - first + 1
    grid = [[None] * len(boroughs) for _ in range(n)]
    col = {b: j for j, b in enumerate(boroughs)}
    for r in records:
        grid[r.month - first][col[r.borough]] = r.count
    return RawTable(tuple(boroughs), tuple((first + i, tuple(grid[i])) for i in range(n)))


def read_table(content: Source) -> RawTable:
    """Parse either layout, detected from the header row."""
    lines = _read_rows(content)
    if lines and tuple(c.strip().lower() for c in lines[0]) == LONG_HEADER:
        return records_to_table(parse_long_csv(content))
    return parse_wide_csv(content)


def clean_series(raw: RawTable, borough: str) -> MonthlySeries:
    """Trim missing cells at either end and linearly interpolate interior gaps."""
    column = raw.column(borough)
    months = [month for month, _ in raw.rows]
    for a, b in zip(months, months[1:]):
        if b - a != 1:
            raise StructuralError(f"months are not consecutive: {a} followed by {b}")
    present = [i for i, v in enumerate(column) if v is not None]
    if len(present) < 2:
        raise InsufficientDataError(
            f"borough {borough!r} has {len(present)} observation(s), need at least 2")
    lo, hi = present[0], present[-1]
    known = np.array(present, dtype=float)
    values = np.interp(np.arange(lo, hi + 1, dtype=float), known,
                       np.array([column[i] for i in present], dtype=float))
    return MonthlySeries(borough, months[lo], values)


def select_boroughs(raw: RawTable, labels: Sequence[str]) -> list[MonthlySeries]:
    labels = list(labels)
    missing = [b for b in labels if b not in raw.header]
    if missing:
        raise UnknownBoroughError(missing)
    return [clean_series(raw, b) for b in labels]


def load_series(path, boroughs: Optional[Sequence[str]] = None) -> list[MonthlySeries]:
    """Read a CSV file and return cleaned series (all boroughs by default)."""
    with open(path, "rb") as fh:
        table = read_table(fh.read())
    return select_boroughs(table, table.header if boroughs is None else boroughs)

"""Labeled result tables and their CSV form."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

Cell = Any  # float, int, bool, str status, or None for "no value"


def format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return format(float(value), ".12g")
    return str(value)


def parse_cell(text: str) -> Cell:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class SweepTable:
    """Grid of parameter points with computed outputs.

    Missing numeric values (e.g. no threshold at this grid point) are ``None``
    and serialize as empty fields.
    """

    columns: tuple[str, ...]
    rows: list[tuple[Cell, ...]] = field(default_factory=list)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        for row in self.rows:
            self._check(row)
        self.rows = [tuple(r) for r in self.rows]

    def _check(self, row: tuple) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row arity {len(row)} != {len(self.columns)} columns")
        for v in row:
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError(f"non-finite value in row {row!r}")

    def append(self, row: Iterable[Cell]) -> None:
        row = tuple(row)
        self._check(row)
        self.rows.append(row)

    def column(self, name: str) -> list[Cell]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_cell(v) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        return cls(tuple(header), [tuple(parse_cell(c) for c in r) for r in reader])

    def rounded(self) -> "SweepTable":
        """Copy with floats rounded to the 12 significant digits used in CSV."""
        return SweepTable(
            self.columns,
            [tuple(parse_cell(format_cell(v)) for v in r) for r in self.rows],
        )

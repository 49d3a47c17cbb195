"""Exact two-dimensional table model, validation and the JSON document format.

Cell values and sums are :class:`fractions.Fraction`; bounds are fractions or
the floats ``-inf``/``inf``.  A table is *complete* when every cell carries a
value and *published* when the suppressed cells have their values withheld.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, NamedTuple, Union

Value = Fraction
Bound = Union[Fraction, float]
Assignment = dict  # CellRef -> Fraction, exactly the suppressed cells
Delta = dict  # CellRef -> Fraction, absent cells are zero

NEG_INF = -math.inf
POS_INF = math.inf


class TableError(ValueError):
    """Raised for malformed table documents or ill-formed tables."""


class AssignmentError(ValueError):
    """Raised when an assignment or delta does not match the suppressed cells."""


class CellRef(NamedTuple):
    row: int
    col: int


def parse_value(text: Any) -> Fraction:
    """Parse a decimal (or ``p/q``) string exactly."""
    if isinstance(text, bool):
        raise TableError(f"not a number: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        if not math.isfinite(text):
            raise TableError(f"value must be finite: {text!r}")
        return Fraction(repr(text))
    if not isinstance(text, str):
        raise TableError(f"not a number: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise TableError(f"not an exact number: {text!r}") from exc


def parse_bound(text: Any) -> Bound:
    if isinstance(text, str):
        s = text.strip().lower()
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return POS_INF
        if s in ("-inf", "-infinity"):
            return NEG_INF
    if isinstance(text, float) and math.isinf(text):
        return POS_INF if text > 0 else NEG_INF
    return parse_value(text)


def format_value(value: Fraction) -> str:
    """Render a fraction as a terminating decimal when possible, else ``p/q``.

    ``parse_value(format_value(v)) == v`` for every fraction.
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = abs(value.numerator) * (10**digits // value.denominator)
    whole, frac = divmod(scaled, 10**digits)
    sign = "-" if value < 0 else ""
    return f"{sign}{whole}.{frac:0{digits}d}"


def format_bound(bound: Bound) -> str:
    if bound == POS_INF:
        return "inf"
    if bound == NEG_INF:
        return "-inf"
    return format_value(bound)


@dataclass(frozen=True)
class Cell:
    value: Fraction | None
    lower: Bound = NEG_INF
    upper: Bound = POS_INF
    suppressed: bool = False


@dataclass(frozen=True)
class Table:
    """An immutable R x C table with published row and column sums."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: tuple[tuple[Cell, ...], ...]
    row_sums: tuple[Fraction, ...]
    col_sums: tuple[Fraction, ...]

    @classmethod
    def from_grid(
        cls,
        values: Iterable[Iterable[Any]],
        lower: Any = NEG_INF,
        upper: Any = POS_INF,
        suppressed: Iterable[tuple[int, int]] = (),
        row_labels: Iterable[str] | None = None,
        col_labels: Iterable[str] | None = None,
    ) -> "Table":
        """Build a complete table from a value grid with uniform bounds.

        ``lower``/``upper`` may also be grids.  Sums are computed exactly.
        """
        grid = [[parse_value(v) for v in row] for row in values]
        n_rows = len(grid)
        n_cols = len(grid[0]) if grid else 0
        lo = _grid_or_scalar(lower, n_rows, n_cols)
        hi = _grid_or_scalar(upper, n_rows, n_cols)
        hidden = {tuple(c) for c in suppressed}
        cells = tuple(
            tuple(
                Cell(grid[i][j], lo[i][j], hi[i][j], (i, j) in hidden)
                for j in range(n_cols)
            )
            for i in range(n_rows)
        )
        rows = tuple(row_labels) if row_labels is not None else default_row_labels(n_rows)
        cols = tuple(col_labels) if col_labels is not None else default_col_labels(n_cols)
        return cls(
            rows,
            cols,
            cells,
            tuple(sum(r, Fraction(0)) for r in grid),
            tuple(sum((grid[i][j] for i in range(n_rows)), Fraction(0)) for j in range(n_cols)),
        )

    @property
    def n_rows(self) -> int:
        return len(self.row_labels)

    @property
    def n_cols(self) -> int:
        return len(self.col_labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def __getitem__(self, ref: tuple[int, int]) -> Cell:
        return self.cells[ref[0]][ref[1]]

    def refs(self) -> Iterator[CellRef]:
        for i in range(self.n_rows):
            for j in range(self.n_cols):
                yield CellRef(i, j)

    @property
    def suppressed_cells(self) -> tuple[CellRef, ...]:
        return tuple(r for r in self.refs() if self[r].suppressed)

    @property
    def published_cells(self) -> tuple[CellRef, ...]:
        return tuple(r for r in self.refs() if not self[r].suppressed)

    @property
    def is_complete(self) -> bool:
        return all(self[r].value is not None for r in self.refs())

    def published(self) -> "Table":
        """The table as an adversary sees it: suppressed values withheld."""
        return replace(
            self,
            cells=tuple(
                tuple(replace(c, value=None) if c.suppressed else c for c in row)
                for row in self.cells
            ),
        )

    def suppressed_values(self) -> Assignment:
        """The true assignment to the suppressed cells of a complete table."""
        out = {}
        for ref in self.suppressed_cells:
            value = self[ref].value
            if value is None:
                raise TableError(f"cell {self.cell_name(ref)} has no value")
            out[ref] = value
        return out

    def with_suppressed(self, refs: Iterable[tuple[int, int]]) -> "Table":
        """Copy of the table with the given cells additionally suppressed."""
        extra = {tuple(r) for r in refs}
        for r in extra:
            self._check_ref(r)
        return replace(
            self,
            cells=tuple(
                tuple(
                    replace(c, suppressed=True) if (i, j) in extra else c
                    for j, c in enumerate(row)
                )
                for i, row in enumerate(self.cells)
            ),
        )

    def resolve(self, row_label: str, col_label: str) -> CellRef:
        try:
            return CellRef(self.row_labels.index(row_label), self.col_labels.index(col_label))
        except ValueError:
            raise TableError(f"unknown cell {row_label}:{col_label}") from None

    def cell_name(self, ref: tuple[int, int]) -> str:
        return f"{self.row_labels[ref[0]]}:{self.col_labels[ref[1]]}"

    def _check_ref(self, ref: tuple[int, int]) -> None:
        i, j = ref
        if not (0 <= i < self.n_rows and 0 <= j < self.n_cols):
            raise TableError(f"cell {ref} outside a {self.n_rows}x{self.n_cols} table")


def default_row_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i + 1) for i in range(n))


def default_col_labels(n: int) -> tuple[str, ...]:
    labels = []
    for j in range(n):
        label, k = "", j
        while True:
            label = chr(ord("a") + k % 26) + label
            k = k // 26 - 1
            if k < 0:
                break
        labels.append(label)
    return tuple(labels)


def _grid_or_scalar(spec: Any, n_rows: int, n_cols: int) -> list[list[Bound]]:
    if isinstance(spec, (list, tuple)):
        return [[parse_bound(v) for v in row] for row in spec]
    b = parse_bound(spec)
    return [[b] * n_cols for _ in range(n_rows)]


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations)}


def validate(t: Table) -> ValidationReport:
    """Check every structural invariant of ``t``; never raises."""
    problems: list[str] = []
    if len(set(t.row_labels)) != t.n_rows:
        problems.append("duplicate row labels")
    if len(set(t.col_labels)) != t.n_cols:
        problems.append("duplicate column labels")
    if len(t.cells) != t.n_rows or any(len(row) != t.n_cols for row in t.cells):
        problems.append("cell grid does not match the labels")
        return ValidationReport(tuple(problems))
    if len(t.row_sums) != t.n_rows:
        problems.append("wrong number of row sums")
    if len(t.col_sums) != t.n_cols:
        problems.append("wrong number of column sums")

    for ref in t.refs():
        cell, name = t[ref], t.cell_name(ref)
        if cell.lower == POS_INF or cell.upper == NEG_INF:
            problems.append(f"{name}: infinite bound on the wrong side")
        if not cell.lower < cell.upper:
            problems.append(f"{name}: bounds not strict")
        if cell.value is None:
            if not cell.suppressed:
                problems.append(f"{name}: published cell without a value")
        elif not cell.lower <= cell.value <= cell.upper:
            problems.append(f"{name}: value {format_value(cell.value)} outside its bounds")

    # sums are only checkable on lines whose values are all known
    for i, published in enumerate(t.row_sums[: t.n_rows]):
        values = [c.value for c in t.cells[i]]
        if all(v is not None for v in values) and sum(values, Fraction(0)) != published:
            problems.append(f"row {t.row_labels[i]}: sum mismatch")
    for j, published in enumerate(t.col_sums[: t.n_cols]):
        values = [t.cells[i][j].value for i in range(t.n_rows)]
        if all(v is not None for v in values) and sum(values, Fraction(0)) != published:
            problems.append(f"column {t.col_labels[j]}: sum mismatch")
    if sum(t.row_sums, Fraction(0)) != sum(t.col_sums, Fraction(0)):
        problems.append("grand totals of row and column sums differ")
    return ValidationReport(tuple(problems))


# -- feasibility ------------------------------------------------------------


def _check_domain(t: Table, a: Mapping) -> None:
    if set(a) != set(t.suppressed_cells):
        raise AssignmentError("assignment domain differs from the suppressed cells")


def is_unbounded_feasible(t: Table, a: Mapping[CellRef, Fraction]) -> bool:
    """True iff filling ``a`` into ``t`` reproduces every published sum."""
    _check_domain(t, a)
    rows = [Fraction(0)] * t.n_rows
    cols = [Fraction(0)] * t.n_cols
    for ref in t.refs():
        cell = t[ref]
        value = a[ref] if cell.suppressed else cell.value
        if value is None:
            raise TableError(f"published cell {t.cell_name(ref)} has no value")
        rows[ref.row] += value
        cols[ref.col] += value
    return tuple(rows) == tuple(t.row_sums) and tuple(cols) == tuple(t.col_sums)


def is_bounded_feasible(t: Table, a: Mapping[CellRef, Fraction]) -> bool:
    if not is_unbounded_feasible(t, a):
        return False
    return all(t[ref].lower <= value <= t[ref].upper for ref, value in a.items())


def apply_delta(a: Mapping[CellRef, Fraction], d: Mapping[CellRef, Fraction]) -> Assignment:
    outside = set(d) - set(a)
    if outside:
        raise AssignmentError(f"delta touches unsuppressed cells {sorted(outside)}")
    return {ref: value + d.get(ref, 0) for ref, value in a.items()}


def negate(d: Mapping[CellRef, Fraction]) -> Delta:
    return {ref: -value for ref, value in d.items()}


# -- JSON document ----------------------------------------------------------


def parse_table(document: str | bytes | Mapping, *, strict: bool = True) -> Table:
    """Build a :class:`Table` from a JSON document (text or decoded mapping).

    With ``strict`` (the default) any invariant violation found by
    :func:`validate` raises :class:`TableError`; otherwise only structural
    problems do and the caller is expected to run :func:`validate`.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise TableError(f"invalid JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, Mapping):
        raise TableError("table document must be a JSON object")
    try:
        rows = tuple(str(x) for x in doc["rows"])
        cols = tuple(str(x) for x in doc["cols"])
        entries = doc["cells"]
    except (KeyError, TypeError) as exc:
        raise TableError(f"missing table field: {exc}") from exc

    row_index = {label: i for i, label in enumerate(rows)}
    col_index = {label: j for j, label in enumerate(cols)}
    grid: list[list[Cell | None]] = [[None] * len(cols) for _ in rows]
    for entry in entries:
        try:
            i = row_index[str(entry["row"])]
            j = col_index[str(entry["col"])]
        except KeyError as exc:
            raise TableError(f"cell with unknown or missing label: {entry!r}") from exc
        if grid[i][j] is not None:
            raise TableError(f"duplicate cell {rows[i]}:{cols[j]}")
        raw = entry.get("value")
        value = None if raw is None else parse_value(raw)
        if "suppressed" in entry:
            suppressed = entry["suppressed"]
            if not isinstance(suppressed, bool):
                raise TableError(f"{rows[i]}:{cols[j]}: 'suppressed' must be a boolean")
        elif value is not None:
            suppressed = False
        else:
            raise TableError(f"{rows[i]}:{cols[j]}: no value and no suppression flag")
        if "lower" not in entry or "upper" not in entry:
            raise TableError(f"{rows[i]}:{cols[j]}: bounds are required")
        grid[i][j] = Cell(value, parse_bound(entry["lower"]), parse_bound(entry["upper"]), suppressed)

    missing = [f"{rows[i]}:{cols[j]}" for i in range(len(rows)) for j in range(len(cols)) if grid[i][j] is None]
    if missing:
        raise TableError(f"missing cells: {', '.join(missing)}")
    cells = tuple(tuple(row) for row in grid)  # type: ignore[arg-type]

    complete = all(c.value is not None for row in cells for c in row)
    row_sums = _parse_sums(doc.get("row_sums"), len(rows), "row_sums")
    col_sums = _parse_sums(doc.get("col_sums"), len(cols), "col_sums")
    if row_sums is None or col_sums is None:
        if not complete:
            raise TableError("published tables must carry row_sums and col_sums")
        if row_sums is None:
            row_sums = tuple(sum((c.value for c in row), Fraction(0)) for row in cells)
        if col_sums is None:
            col_sums = tuple(
                sum((cells[i][j].value for i in range(len(rows))), Fraction(0)) for j in range(len(cols))
            )
    table = Table(rows, cols, cells, row_sums, col_sums)
    if strict:
        report = validate(table)
        if not report.ok:
            raise TableError("; ".join(report.violations))
    return table


def _parse_sums(raw: Any, n: int, name: str) -> tuple[Fraction, ...] | None:
    if raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != n:
        raise TableError(f"{name} must list {n} values")
    return tuple(parse_value(v) for v in raw)


def table_to_dict(t: Table) -> dict:
    cells = []
    for ref in t.refs():
        c = t[ref]
        cells.append(
            {
                "row": t.row_labels[ref.row],
                "col": t.col_labels[ref.col],
                "value": None if c.value is None else format_value(c.value),
                "lower": format_bound(c.lower),
                "upper": format_bound(c.upper),
                "suppressed": c.suppressed,
            }
        )
    return {
        "rows": list(t.row_labels),
        "cols": list(t.col_labels),
        "cells": cells,
        "row_sums": [format_value(v) for v in t.row_sums],
        "col_sums": [format_value(v) for v in t.col_sums],
    }


def render_table(t: Table) -> str:
    return json.dumps(table_to_dict(t), indent=2, sort_keys=True)


def cell_to_json(t: Table, ref: tuple[int, int]) -> dict:
    return {"row": t.row_labels[ref[0]], "col": t.col_labels[ref[1]]}

"""Shared rendering of report structures for the text formatters.

Reports are plain data after `to_data`: class vectors are short integer lists,
Hom tables are square lists of lists, cohomology and strand tables are mappings
from (stringified) degrees to dimensions, and element lists are lists of
mappings with the same keys. Each shape gets its own layout.
"""

from collections.abc import Mapping, Sequence
from typing import Any

from coxcat.core.interfaces import IFormatter

def is_scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def is_vector(value: Any) -> bool:
    """A flat list of scalars, e.g. a class vector or a witness θ"""
    return isinstance(value, list) and all(is_scalar(x) for x in value)


def is_matrix(value: Any) -> bool:
    """Two or more rows of scalars of equal length"""
    return (
        isinstance(value, list)
        and len(value) > 1
        and all(is_vector(row) and row for row in value)
        and len({len(row) for row in value}) == 1
    )


def is_graded(value: Any) -> bool:
    """Degree → scalar, as in strand dimensions and cohomology tables"""
    if not isinstance(value, Mapping) or not value:
        return False
    try:
        [int(k) for k in value]
    except (TypeError, ValueError):
        return False
    return all(is_scalar(v) for v in value.values())


def is_records(value: Any) -> bool:
    """A list of mappings sharing their keys and holding only scalars or vectors"""
    if not isinstance(value, list) or not value or not all(isinstance(x, Mapping) for x in value):
        return False
    keys = list(value[0])
    return all(
        list(row) == keys and all(is_scalar(v) or is_vector(v) for v in row.values())
        for row in value
    )


class BaseFormatter(IFormatter):
    """Indented text with aligned grids for matrices, graded tables and records"""

    def __init__(self, labels: dict[str, str] | None = None):
        self.labels = labels or {}

    @property
    def name(self) -> str:
        return "base"

    def format(self, report: dict[str, Any]) -> str:
        return "\n".join(self._lines(report)) + "\n"

    def _get_label(self, key: str) -> str:
        return self.labels.get(key, key)

    def cell(self, value: Any) -> str:
        if value is None:
            return "-"
        if value == []:
            return "[]"
        if isinstance(value, bool):
            return "yes" if value else "no"
        if is_vector(value):
            return "(" + ", ".join(self.cell(x) for x in value) + ")"
        return str(value)

    def grid(self, rows: Sequence[Sequence[str]], header: Sequence[str] | None = None) -> list[str]:
        """Right-aligned columns, separated by two spaces"""
        table = [list(header)] + [list(r) for r in rows] if header else [list(r) for r in rows]
        widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
        return ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in table]

    def matrix_rows(self, value: list[list[Any]]) -> list[list[str]]:
        return [[self.cell(x) for x in row] for row in value]

    def graded_rows(self, value: Mapping[str, Any]) -> tuple[list[str], list[str]]:
        degrees = sorted(value, key=int)
        return [str(p) for p in degrees], [self.cell(value[p]) for p in degrees]

    def record_rows(self, value: list[Mapping[str, Any]]) -> tuple[list[str], list[list[str]]]:
        header = [self._get_label(k) for k in value[0]]
        return header, [[self.cell(v) for v in row.values()] for row in value]

    def _lines(self, data: Mapping[str, Any], indent: int = 0) -> list[str]:
        pad = " " * indent
        lines: list[str] = []
        for key, value in data.items():
            label = self._get_label(str(key))
            if is_scalar(value) or is_vector(value):
                lines.append(f"{pad}{label}: {self.cell(value)}")
            elif is_matrix(value):
                lines.append(f"{pad}{label}:")
                lines.extend(f"{pad}  {row}" for row in self.grid(self.matrix_rows(value)))
            elif is_graded(value):
                degrees, values = self.graded_rows(value)
                lines.append(f"{pad}{label}:")
                lines.extend(f"{pad}  {row}" for row in self.grid([values], header=degrees))
            elif is_records(value):
                header, rows = self.record_rows(value)
                lines.append(f"{pad}{label}:")
                lines.extend(f"{pad}  {row}" for row in self.grid(rows, header=header))
            elif isinstance(value, Mapping):
                lines.append(f"{pad}{label}:")
                lines.extend(self._lines(value, indent + 2))
            else:
                lines.append(f"{pad}{label}:")
                for item in value:
                    if isinstance(item, Mapping):
                        nested = self._lines(item, indent + 4)
                        lines.append(f"{pad}  - {nested[0].lstrip()}" if nested else f"{pad}  -")
                        lines.extend(nested[1:])
                    else:
                        lines.append(f"{pad}  - {self.cell(item)}")
        return lines

"""Markdown formatter"""

from collections.abc import Mapping
from typing import Any

from coxcat.formatters.base import BaseFormatter, is_graded, is_matrix, is_records


class MarkdownFormatter(BaseFormatter):
    """Headings for top-level sections, tables for matrices and graded data"""

    @property
    def name(self) -> str:
        return "markdown"

    def table(self, header: list[str], rows: list[list[str]]) -> list[str]:
        return [
            "| " + " | ".join(header) + " |",
            "|" + "|".join("---" for _ in header) + "|",
            *("| " + " | ".join(row) + " |" for row in rows),
        ]

    def _section(self, label: str, value: Any) -> list[str]:
        if is_matrix(value):
            rows = self.matrix_rows(value)
            header = [""] + [str(j) for j in range(len(rows[0]))]
            return [f"### {label}", "", *self.table(header, [[str(i)] + r for i, r in enumerate(rows)]), ""]
        if is_graded(value):
            degrees, values = self.graded_rows(value)
            return [f"### {label}", "", *self.table(["degree", *degrees], [["", *values]]), ""]
        if is_records(value):
            header, rows = self.record_rows(value)
            return [f"### {label}", "", *self.table(header, rows), ""]
        if isinstance(value, Mapping) or isinstance(value, list) and value:
            return [f"### {label}", "", "```", *self._lines({label: value})[1:], "```", ""]
        return [f"- **{label}**: `{self.cell(value)}`"]

    def format(self, report: dict[str, Any]) -> str:
        lines = [f"# {report.get('command', 'report')}", ""]

        for key, value in report.items():
            if key == "command":
                continue
            label = self._get_label(key)
            if isinstance(value, Mapping):
                lines.append(f"## {label}")
                lines.append("")
                for k, v in value.items():
                    lines.extend(self._section(self._get_label(str(k)), v))
                lines.append("")
            elif isinstance(value, list):
                lines.append(f"## {label}")
                lines.append("")
                lines.extend(f"- `{self.cell(item)}`" for item in value)
                lines.append("")
            else:
                lines.append(f"**{label}**: {value}")

        return "\n".join(lines).rstrip() + "\n"

"""Plain text formatter"""

from typing import Any

from coxcat.formatters.base import BaseFormatter

_FRAME = ("command", "input_digest", "result", "certificates")


class PlainFormatter(BaseFormatter):
    """Terminal-friendly report: a header line, then the result before the certificates"""

    @property
    def name(self) -> str:
        return "plain"

    def format(self, report: dict[str, Any]) -> str:
        digest = report.get("input_digest") or ""
        header = str(report.get("command", "report"))
        lines = [f"{header}  [{digest[:12]}]" if digest else header, ""]
        lines.extend(self._lines(report.get("result") or {}))
        certificates = report.get("certificates") or []
        if certificates:
            lines.extend(["", f"certificates ({len(certificates)}):"])
            lines.extend(self._lines({str(i): c for i, c in enumerate(certificates)}, 2))
        rest = {k: v for k, v in report.items() if k not in _FRAME}
        if rest:
            lines.append("")
            lines.extend(self._lines(rest))
        return "\n".join(lines) + "\n"

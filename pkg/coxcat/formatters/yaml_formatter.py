"""Deterministic YAML formatter"""

from typing import Any

import yaml

from coxcat.core.interfaces import IFormatter


class YamlFormatter(IFormatter):
    """Sorted keys and block style, so identical reports are byte-identical"""

    @property
    def name(self) -> str:
        return "yaml"

    def format(self, report: dict[str, Any]) -> str:
        return yaml.safe_dump(report, sort_keys=True, default_flow_style=False, allow_unicode=True)

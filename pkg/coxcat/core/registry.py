"""Formatter registry with plugin discovery"""

import importlib
import inspect
import logging
import sys
from pathlib import Path

from coxcat.core.errors import PreconditionError
from coxcat.core.interfaces import IFormatter

logger = logging.getLogger(__name__)


class FormatterRegistry:
    """Registry for managing report formatters"""

    def __init__(self):
        self._formatters: dict[str, IFormatter] = {}

    def register_formatter(self, formatter: IFormatter) -> None:
        self._formatters[formatter.name] = formatter

    def get_formatter(self, name: str) -> IFormatter:
        formatter = self._formatters.get(name)
        if formatter is None:
            raise PreconditionError(
                f"unknown format '{name}'; available: {', '.join(self.list_formatters())}"
            )
        return formatter

    def discover_plugins(self, plugins_dir: str = "plugins") -> None:
        """Register every IFormatter subclass found in a plugins directory"""
        plugins_path = Path(plugins_dir)

        if not plugins_path.exists():
            return

        if str(plugins_path.parent) not in sys.path:
            sys.path.insert(0, str(plugins_path.parent))

        for file_path in sorted(plugins_path.glob("*.py")):
            if file_path.name.startswith("_"):
                continue

            module_name = f"{plugins_path.name}.{file_path.stem}"

            try:
                module = importlib.import_module(module_name)

                for _, obj in inspect.getmembers(module, inspect.isclass):
                    if obj is IFormatter or inspect.isabstract(obj):
                        continue
                    if issubclass(obj, IFormatter):
                        self.register_formatter(obj())
                        logger.debug(f"Registered formatter plugin {obj.__name__}")

            except Exception as e:
                logger.warning(f"Failed to load plugin from {file_path}: {e}")

    def list_formatters(self) -> list[str]:
        return sorted(self._formatters)


registry = FormatterRegistry()

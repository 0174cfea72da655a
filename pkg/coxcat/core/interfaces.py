"""Core interfaces for report rendering"""

from abc import ABC, abstractmethod
from typing import Any


class IFormatter(ABC):
    """Interface for report formatters"""

    @property
    @abstractmethod
    def name(self) -> str:
        """Unique formatter identifier, used by --format"""
        pass

    @abstractmethod
    def format(self, report: dict[str, Any]) -> str:
        """Convert a serialized report to text"""
        pass

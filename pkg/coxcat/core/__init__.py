"""Core components"""

from coxcat.core.config import ComplexDocument, InputDocument, RunSettings
from coxcat.core.registry import FormatterRegistry, registry
from coxcat.core.report import Report

__all__ = ["ComplexDocument", "FormatterRegistry", "InputDocument", "Report", "RunSettings", "registry"]

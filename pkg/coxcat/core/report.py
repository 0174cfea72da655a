"""Command reports and their exact serialization"""

import dataclasses
from enum import Enum
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, Field

from coxcat.__version__ import __version__


def to_data(value: Any) -> Any:
    """Plain YAML-safe data; fractions become decimal strings like "-2/3"."""
    if isinstance(value, Enum):
        return to_data(value.value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_data(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {_key(k): to_data(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((to_data(v) for v in value), key=repr)
    if isinstance(value, (list, tuple)):
        return [to_data(v) for v in value]
    if isinstance(value, BaseModel):
        return to_data(value.model_dump())
    return str(value)


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return "(" + ", ".join(str(x) for x in k) + ")"
    return str(k)


class Report(BaseModel):
    """Structured output of one command"""

    command: str
    input_digest: str = Field(default="", description="sha256 of the canonical input")
    result: dict[str, Any] = Field(default_factory=dict)
    certificates: list[dict[str, Any]] = Field(default_factory=list)
    version: str = Field(default=__version__)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "result": to_data(self.result),
            "certificates": to_data(self.certificates),
            "version": self.version,
        }

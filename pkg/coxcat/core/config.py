"""Input documents and run settings using Pydantic"""

import hashlib
import logging
import os
from pathlib import Path
from typing import Any, Literal

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from coxcat.core.errors import SchemaError

# Load .env file
load_dotenv()

logger = logging.getLogger(__name__)


def resolve_env_var(value: Any) -> Any:
    """Resolve ${VAR} and ${VAR:-default} references"""
    if isinstance(value, str) and value.startswith("${") and value.endswith("}"):
        env_var = value[2:-1]
        if ":-" in env_var:
            var_name, default_value = env_var.split(":-", 1)
            return os.getenv(var_name, default_value)
        resolved = os.getenv(env_var)
        if resolved is None:
            raise ValueError(f"Environment variable '{env_var}' is not set. Set it in .env or export {env_var}=value")
        return resolved
    elif isinstance(value, list):
        return [resolve_env_var(item) for item in value]
    elif isinstance(value, dict):
        return {k: resolve_env_var(v) for k, v in value.items()}
    return value


class EnvVarMixin:
    """Mixin to add env var resolution to all fields"""

    @model_validator(mode="before")
    @classmethod
    def resolve_env_vars(cls, values):
        if isinstance(values, dict):
            return {k: resolve_env_var(v) for k, v in values.items()}
        return values


def _as_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("booleans are not integers")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return int(value.strip())
    raise ValueError(f"expected an integer or a decimal string, got {value!r}")


def canonical_digest(*models: BaseModel) -> str:
    """sha256 of the sorted YAML dump of one or more documents"""
    canonical = yaml.safe_dump([m.model_dump(mode="json") for m in models], sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()


def _int_rows(rows: list[list[Any]]) -> list[list[int]]:
    return [[_as_int(x) for x in row] for row in rows]


class InputDocument(BaseModel, EnvVarMixin):
    """A toric variety given by a fan or by Cox degree data"""

    mode: Literal["fan", "cox"] = Field(default="fan", description="How the variety is described")
    name: str = Field(default="", description="Label used in reports")
    rank: int | None = Field(default=None, description="Rank of the lattice N in fan mode")
    rays: list[list[int]] = Field(default_factory=list, description="Primitive ray generators")
    cones: list[list[int]] = Field(default_factory=list, description="Maximal cones as ray indices")
    multipliers: list[int] | None = Field(default=None, description="Stacky multipliers b_ρ")
    degrees: list[list[int]] = Field(default_factory=list, description="deg(x_ρ) rows in cox mode")
    torsion: list[int] = Field(default_factory=list, description="Torsion orders of Cl")

    @field_validator("rays", "cones", "degrees", mode="before")
    @classmethod
    def parse_rows(cls, v: Any) -> Any:
        if isinstance(v, list):
            return _int_rows(v)
        return v

    @field_validator("multipliers", "torsion", mode="before")
    @classmethod
    def parse_vector(cls, v: Any) -> Any:
        if isinstance(v, list):
            return [_as_int(x) for x in v]
        return v

    @field_validator("rank", mode="before")
    @classmethod
    def parse_rank(cls, v: Any) -> Any:
        return None if v is None else _as_int(v)

    @model_validator(mode="after")
    def check_mode(self) -> "InputDocument":
        if self.mode == "fan":
            if self.rank is None or not self.rays:
                raise ValueError("fan mode needs 'rank' and 'rays'")
            if any(len(r) != self.rank for r in self.rays):
                raise ValueError("every ray must have length 'rank'")
            if self.multipliers is not None and len(self.multipliers) != len(self.rays):
                raise ValueError("one multiplier per ray is required")
        elif not self.degrees:
            raise ValueError("cox mode needs 'degrees'")
        return self

    def digest(self) -> str:
        return canonical_digest(self)


class TermSpec(BaseModel):
    twist: list[int] = Field(..., description="The twist c of S(c)")
    multiplicity: int = Field(default=1, ge=1)

    @field_validator("twist", mode="before")
    @classmethod
    def parse_twist(cls, v: Any) -> Any:
        if isinstance(v, list):
            return [_as_int(x) for x in v]
        return v


class ComplexDocument(BaseModel, EnvVarMixin):
    """A Θ-twisted free complex over the Cox ring"""

    name: str = Field(default="", description="Label used in reports")
    terms: dict[int, list[TermSpec]] = Field(..., description="Cohomological degree → summands")
    differentials: dict[int, list[list[str]]] = Field(
        default_factory=dict, description="Source degree → matrix of polynomial strings"
    )

    @field_validator("differentials", mode="before")
    @classmethod
    def stringify_entries(cls, v: Any) -> Any:
        if isinstance(v, dict):
            return {k: [[str(x) for x in row] for row in m] for k, m in v.items()}
        return v

    def digest(self) -> str:
        return canonical_digest(self)


class LoggingConfig(BaseModel, EnvVarMixin):
    """Logging configuration"""

    level: str = Field(default="INFO", description="Log level")
    format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format",
    )

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {v!r}")
        return level


class RunSettings(BaseModel, EnvVarMixin):
    """Options shared by every command"""

    characteristic: int = Field(default=0, ge=0, description="Field characteristic for homology ranks")
    nef_battery: int = Field(default=6, ge=1, description="Nef twists tested per transform")
    order_seed: int | None = Field(default=None, description="Tie-break seed for the Θ order")
    frobenius: int | None = Field(default=None, ge=1, description="Frobenius oracle level")
    uniform_vanishing: bool = Field(default=False, description="Run the uniform vanishing sweep")
    plugins: bool = Field(default=False, description="Load formatter plugins from plugins_dir")
    plugins_dir: str = Field(default="plugins", description="Directory scanned when plugins is on")
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @field_validator("characteristic")
    @classmethod
    def validate_characteristic(cls, v: int) -> int:
        if v > 1 and any(v % p == 0 for p in range(2, int(v**0.5) + 1)):
            raise ValueError(f"characteristic {v} is not prime")
        if v == 1:
            raise ValueError("characteristic 1 is not a field")
        return v

    def merged(self, **overrides: Any) -> "RunSettings":
        """CLI flags override file settings; None leaves a value alone"""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return _validate(RunSettings, data, "settings")


def _read_yaml(path: str | Path) -> Any:
    try:
        with open(path) as f:
            return yaml.safe_load(f)
    except FileNotFoundError as e:
        raise SchemaError(f"file '{path}' not found") from e
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise SchemaError(f"'{path}' is not valid YAML{where}") from e


def _validate(model: type[BaseModel], data: Any, source: str) -> Any:
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: expected a mapping at the top level")
    try:
        return model(**data)
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
        )
        raise SchemaError(f"{source}: {details}") from e
    except ValueError as e:
        raise SchemaError(f"{source}: {e}") from e


def load_input(path: str | Path) -> InputDocument:
    return _validate(InputDocument, _read_yaml(path), str(path))


def load_complex(path: str | Path) -> ComplexDocument:
    data = _read_yaml(path)
    if isinstance(data, dict) and "complex" in data:
        data = data["complex"]
    return _validate(ComplexDocument, data, str(path))


def load_settings(path: str | Path | None = None) -> RunSettings:
    """The `settings:` block of coxcat.yaml, defaults when absent"""
    candidate = Path(path) if path else Path("coxcat.yaml")
    if not candidate.exists():
        return RunSettings()
    data = _read_yaml(candidate) or {}
    block = data.get("settings", {}) if isinstance(data, dict) else {}
    logger.debug(f"Loaded settings from {candidate}")
    return _validate(RunSettings, block, str(candidate))

"""Exception hierarchy with CLI exit codes"""

from dataclasses import dataclass, field


class CoxcatError(Exception):
    """Base class for all coxcat errors"""

    exit_code = 1


class SchemaError(CoxcatError):
    """Input document failed validation"""

    exit_code = 2


class PreconditionError(CoxcatError):
    """An operation was called outside its domain"""

    exit_code = 3


class InvariantError(CoxcatError):
    """Two independent computations disagree"""

    exit_code = 4


class UnboundedError(PreconditionError):
    """Lattice enumeration requested on an unbounded polyhedron without a box"""


class NonGenericError(PreconditionError):
    """A class lies on a wall of the secondary fan where a chamber was required"""


@dataclass(frozen=True)
class FanViolation:
    kind: str
    index: int | tuple[int, ...] | None
    message: str


@dataclass
class FanValidationError(PreconditionError):
    violations: list[FanViolation] = field(default_factory=list)

    def __str__(self) -> str:
        return "; ".join(f"{v.kind}: {v.message}" for v in self.violations)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

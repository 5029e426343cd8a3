"""
Exception hierarchy for semifix

Validation failures carry every violated constraint, not just the first.
"""

from dataclasses import dataclass
from typing import List, Optional


@dataclass(frozen=True)
class ConstraintViolation:
    """One failed constraint: a formula-style anchor plus a human message"""
    constraint: str
    message: str

    def __str__(self) -> str:
        return f"[{self.constraint}] {self.message}"


class SemifixError(Exception):
    """Base class for all semifix errors"""


class SetupValidationError(SemifixError, ValueError):
    """Parameters violate one or more constraints of a semilinear setup"""

    def __init__(self, violations: List[ConstraintViolation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    @classmethod
    def single(cls, constraint: str, message: str) -> "SetupValidationError":
        return cls([ConstraintViolation(constraint, message)])


class InsufficientCyclotomicOrder(SetupValidationError):
    """A root of unity is needed that does not live in Q(zeta_M)"""

    def __init__(self, message: str, minimal_order: int):
        self.minimal_order = minimal_order
        super().__init__([ConstraintViolation(
            "roots of unity lie in Q(zeta_M)",
            f"{message}; cyclotomic order must be a multiple of {minimal_order}",
        )])


class NonSplitAlgebraError(SetupValidationError):
    """A vertex would need a simple module with division degree > 1"""

    def __init__(self, message: str):
        super().__init__([ConstraintViolation("division_degree = 1", message)])


class ParityConflict(SemifixError, ValueError):
    """An alternating form was requested on an odd-dimensional space"""


class InvolutionError(SemifixError, RuntimeError):
    """The vertex involution does not map the spectrum to itself"""


class InvariantFailure(SemifixError, AssertionError):
    """An internal consistency check failed"""


class OracleRegimeError(SemifixError, ValueError):
    """Matrix oracle was asked to run outside the numberfield regime"""


class ConfigError(SemifixError, ValueError):
    """A configuration file could not be parsed"""

    def __init__(self, message: str, field: Optional[str] = None,
                 line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")

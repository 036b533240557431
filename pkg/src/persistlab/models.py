"""Shared result models, status enums and exceptions."""

import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Any, Optional, Union

Number = Union[int, float, Fraction]


class PersistlabError(Exception):
    """Base class for persistlab errors."""

    pass


class SpecError(PersistlabError, ValueError):
    """Invalid distribution parameters or spec text."""

    pass


class PathError(PersistlabError, ValueError):
    """Invalid path or path index."""

    pass


class TableError(PersistlabError, ValueError):
    """Exact table request out of range."""

    pass


class BudgetError(PersistlabError):
    """Simulation request beyond the configured budget."""

    pass


class FitError(PersistlabError, ValueError):
    """Exponent fit without enough usable points."""

    pass


class BoundInputError(PersistlabError, ValueError):
    """Missing or inconsistent inputs to a bound check."""

    pass


class SimulationError(PersistlabError):
    """A worker block failed during simulation."""

    pass


class Strictness(str, Enum):
    """Comparison used against the persistence threshold."""

    STRICT = "strict"  # max < y
    WEAK = "weak"  # max <= y


class Source(str, Enum):
    """Where the inputs of a bound report came from."""

    EXACT = "exact"
    MONTECARLO = "montecarlo"


class Inequality(str, Enum):
    """The four convolution-bound inequalities."""

    UPPER_CONVOLUTION = "upper-convolution"
    LOWER_CONVOLUTION = "lower-convolution"
    TWO_SIDED_UPPER = "two-sided-upper"
    TWO_SIDED_LOWER = "two-sided-lower"


class ExitCode(IntEnum):
    """Process exit codes of the command line front end."""

    OK = 0
    USAGE = 1
    VERIFICATION_FAILED = 2


def _encode_number(value: Number) -> Any:
    if isinstance(value, Fraction):
        return {"fraction": f"{value.numerator}/{value.denominator}", "float": float(value)}
    return value


def _decode_number(value: Any) -> Number:
    if isinstance(value, dict) and "fraction" in value:
        return Fraction(value["fraction"])
    return value


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo point estimate.

    ``ties`` counts paths whose statistic landed exactly on the threshold; for laws
    with a density this is a diagnostic curiosity, for Rademacher it is routine.
    """

    value: float
    stderr: float
    paths: int
    seed: int
    n: int
    config_digest: str
    ties: int = 0

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Estimate":
        return cls(
            value=float(data["value"]),
            stderr=float(data["stderr"]),
            paths=int(data["paths"]),
            seed=int(data["seed"]),
            n=int(data["n"]),
            config_digest=str(data["config_digest"]),
            ties=int(data.get("ties", 0)),
        )

    def z_score(self, target: float) -> float:
        """Distance to ``target`` in standard errors (0 when both coincide exactly)."""
        if self.stderr == 0:
            return 0.0 if self.value == target else float("inf")
        return (self.value - target) / self.stderr


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one inequality check."""

    inequality: Inequality
    n: int
    lhs: Number
    rhs: Number
    margin: Number
    holds: bool
    constants: dict[str, float] = field(default_factory=dict)
    source: Source = Source.EXACT
    allowance: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "inequality": self.inequality.value,
            "n": self.n,
            "lhs": _encode_number(self.lhs),
            "rhs": _encode_number(self.rhs),
            "margin": _encode_number(self.margin),
            "holds": self.holds,
            "constants": dict(self.constants),
            "source": self.source.value,
            "allowance": self.allowance,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BoundReport":
        return cls(
            inequality=Inequality(data["inequality"]),
            n=int(data["n"]),
            lhs=_decode_number(data["lhs"]),
            rhs=_decode_number(data["rhs"]),
            margin=_decode_number(data["margin"]),
            holds=bool(data["holds"]),
            constants=dict(data.get("constants", {})),
            source=Source(data.get("source", Source.EXACT.value)),
            allowance=float(data.get("allowance", 0.0)),
        )


@dataclass(frozen=True)
class ResultRecord:
    """One append-only line of a results file."""

    command: str
    config: dict[str, Any]
    payload: dict[str, Any]
    version: str
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        data = json.loads(line)
        return cls(
            command=data["command"],
            config=data["config"],
            payload=data["payload"],
            version=data["version"],
            timestamp=data["timestamp"],
        )


@dataclass(frozen=True)
class CheckResult:
    """One acceptance check in a suite summary."""

    name: str
    passed: bool
    message: str
    seconds: float = 0.0
    details: Optional[dict[str, Any]] = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

"""Three-valued verdicts, decomposition traces and the work budget."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

TRIVIAL = "Trivial"
NONTRIVIAL = "NonTrivial"
IN = "In"
NOT_IN = "NotIn"
UNKNOWN = "Unknown"

DEFAULT_FUEL = 1_000_000


class OutOfFuel(Exception):
    pass


class Fuel:
    """Global work-unit counter shared by one top-level query."""

    def __init__(self, budget: int = DEFAULT_FUEL):
        self.budget = budget
        self.used = 0

    def spend(self, units: int = 1) -> None:
        self.used += units
        if self.used > self.budget:
            raise OutOfFuel(f"fuel budget {self.budget} exhausted")

    @property
    def remaining(self) -> int:
        return max(0, self.budget - self.used)


def as_fuel(fuel) -> Fuel:
    if fuel is None:
        return Fuel()
    if isinstance(fuel, Fuel):
        return fuel
    return Fuel(int(fuel))


@dataclass
class Decision:
    verdict: str
    witness: Any = None
    reason: Optional[str] = None
    trace: list = field(default_factory=list)

    @property
    def decided(self) -> bool:
        return self.verdict != UNKNOWN

    @property
    def is_unknown(self) -> bool:
        return self.verdict == UNKNOWN

    @classmethod
    def unknown(cls, reason: str, trace=None) -> "Decision":
        return cls(UNKNOWN, reason=reason, trace=list(trace or []))

    def __repr__(self):
        extra = f", reason={self.reason!r}" if self.reason else ""
        return f"Decision({self.verdict}{extra})"

"""Error hierarchy shared by the classgroups modules and management commands."""


class QuadTowerError(Exception):
    """Base class for every error raised by the classgroups package."""


class DomainError(QuadTowerError, ValueError):
    """An input lies outside the domain where an operation is defined."""


class HypothesisGateError(DomainError):
    """A family or theorem hypothesis failed; ``condition`` names the first one."""

    def __init__(self, condition: str, message: str | None = None) -> None:
        self.condition = condition
        super().__init__(message or f"hypothesis failed: {condition}")


class CapacityError(QuadTowerError):
    """An enumeration would exceed the configured size bound."""


class UnitTooLargeError(QuadTowerError):
    """The fundamental unit of Q(sqrt(d)) exceeds the configured digit cap."""

    def __init__(self, d: int, digit_cap: int, message: str | None = None) -> None:
        self.d = d
        self.digit_cap = digit_cap
        super().__init__(
            message or f"fundamental unit of Q(sqrt({d})) exceeds {digit_cap} digits"
        )


class ConstructionError(QuadTowerError):
    """A group presentation is inconsistent with its parameters."""


class CoverageError(QuadTowerError):
    """No subgroup table row (or auxiliary parameter) applies to the input."""


class InvariantViolation(QuadTowerError, AssertionError):
    """An internal consistency check failed."""

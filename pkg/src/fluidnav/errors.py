"""Exception and warning types shared across the package."""

from __future__ import annotations


class FluidNavError(Exception):
    """Base class for all package errors."""


class SingularPoint(FluidNavError):
    """Query point coincides with a singularity center (within tolerance)."""


class NoConvergence(FluidNavError):
    """Newton inversion failed to converge within the iteration budget."""


class RootInsideCylinder(FluidNavError):
    """The only root the inversion can find lies inside an excluded disk."""


class StagnationPoint(FluidNavError):
    """Flow velocity vanishes; the streamline direction is undefined."""


class UnknownAgent(FluidNavError):
    """Referenced agent id does not exist."""


class AlreadyFaulty(FluidNavError):
    """Failure injected into an agent that has already failed."""


class AllAtGoal(FluidNavError):
    """Goal-offset resultant is (numerically) zero; no heading is defined."""


class StepBudgetExhausted(FluidNavError):
    """Run hit its step budget before converging. Carries the partial log."""

    def __init__(self, message: str, log=None):
        super().__init__(message)
        self.log = log


class InvalidSpec(FluidNavError):
    """Scenario specification is invalid."""


class SchemaError(InvalidSpec):
    """A scenario field is missing, unknown, or has a bad value."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class RegimeError(InvalidSpec):
    """Scenario violates a structural property of its declared regime."""

    def __init__(self, regime_property: str, message: str):
        super().__init__(f"{regime_property}: {message}")
        self.regime_property = regime_property


class ScenarioSyntaxError(InvalidSpec):
    """Scenario file is not syntactically valid."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = "" if line is None else f" (line {line}, column {column})"
        super().__init__(f"{message}{loc}")
        self.line = line
        self.column = column


class InsideCylinderWarning(UserWarning):
    """Field evaluated at a point inside an excluded disk."""


class OverlappingDisksWarning(UserWarning):
    """Excluded disks overlap; boundary streamlines are only approximate."""

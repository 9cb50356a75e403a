"""Streamline sliding: tangent/velocity evaluation and single-step advances.

The primary stepper advances the potential value by speed*dt at constant
stream value and Newton-inverts back to a position.  An independent RK4
stepper integrates the matching velocity field dz/dt = v / f'(z) (for which
d phi/dt = v and d psi/dt = 0 hold exactly along solutions) and serves as a
cross-check and as the fallback when inversion fails.

Note the speed semantics of the potential-advance rule: the local ground
speed is v / |f'(z)|, not v; far from all disks |f'| approaches the number
of superposed doublets.  The RK4 field matches that modulation so the two
steppers agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoConvergence, RootInsideCylinder, SingularPoint, StagnationPoint
from .flow_field import FlowField

STAGNATION_THRESHOLD = 1e-10


@dataclass(frozen=True)
class StepParams:
    """Time increment dt (s) and sliding speed (m/s)."""

    dt: float
    speed: float

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.speed < 0.0:
            raise ValueError(f"speed must be >= 0, got {self.speed}")


@dataclass(frozen=True)
class TangentVector:
    """Unit direction along the local streamline plus the raw gradient norm."""

    direction: tuple[float, float]
    raw_gradient_norm: float

    @property
    def as_complex(self) -> complex:
        return complex(self.direction[0], self.direction[1])


@dataclass(frozen=True)
class StepOutcome:
    position: complex
    flags: tuple[str, ...] = ()


def tangent(z: complex, field: FlowField) -> TangentVector:
    """Unit tangent (d psi/dy, -d psi/dx)/|.|, i.e. conj(f') normalized."""
    u = field.derivative(z).conjugate()
    norm = abs(u)
    if norm <= STAGNATION_THRESHOLD:
        raise StagnationPoint(f"gradient norm {norm:.3e} at {z}")
    return TangentVector((u.real / norm, u.imag / norm), norm)


def desired_velocity(z: complex, field: FlowField, speed: float) -> tuple[float, float]:
    """Commanded velocity: speed times the unit streamline tangent."""
    t = tangent(z, field)
    return (speed * t.direction[0], speed * t.direction[1])


def rk4_step(z: complex, field: FlowField, params: StepParams) -> complex:
    """Classical 4th-order step of dz/dt = v / f'(z)."""

    def vel(p: complex) -> complex:
        d = field.derivative(p)
        if abs(d) <= STAGNATION_THRESHOLD:
            raise StagnationPoint(f"stagnation at {p} during RK4 stage")
        return params.speed / d

    dt = params.dt
    k1 = vel(z)
    k2 = vel(z + 0.5 * dt * k1)
    k3 = vel(z + 0.5 * dt * k2)
    k4 = vel(z + dt * k3)
    return z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def streamline_step(z: complex, field: FlowField, params: StepParams,
                    psi_shift: float = 0.0) -> StepOutcome:
    """Advance phi by speed*dt at constant psi via Newton inversion.

    ``psi_shift`` nudges the target stream value once (used to move an agent
    off a dividing streamline at a field rebuild).  Falls back to one RK4
    step when inversion fails; raises StagnationPoint if both fail.
    """
    pair = field.evaluate(z)
    target = complex(pair.phi + params.speed * params.dt, pair.psi + psi_shift)
    try:
        return StepOutcome(field.invert(target, guess=z))
    except (NoConvergence, RootInsideCylinder):
        return StepOutcome(rk4_step(z, field, params), ("fallback_rk4",))


def safe_step(z: complex, field: FlowField, params: StepParams,
              psi_shift: float = 0.0) -> StepOutcome:
    """Step with the full degradation ladder: Newton, RK4, then hold.

    A position currently inside an excluded disk (a moving obstacle may have
    swept over it) is held in place until the disk clears.
    """
    if field.inside_any_disk(z):
        return StepOutcome(z, ("hold_inside_disk",))
    try:
        return streamline_step(z, field, params, psi_shift=psi_shift)
    except StagnationPoint:
        return StepOutcome(z, ("hold_stagnation",))
    except SingularPoint:
        return StepOutcome(z, ("hold_singular",))


def psi_drift(z0: complex, z1: complex, field: FlowField) -> float:
    """Absolute stream-value change between two positions in one field."""
    return abs(field.evaluate(z1).psi - field.evaluate(z0).psi)

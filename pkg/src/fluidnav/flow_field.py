"""Complex potential-flow field: evaluation, differentiation, numerical inversion.

The transform superposes a uniform stream along heading ``theta`` with one
doublet per excluded disk.  Written with ``rot = exp(-j*theta)``:

    f(z) = (1 - beta) * z * rot
         + beta * sum_h [ (z - c_h) * rot + r_h^2 / ((z - c_h) * rot) ]

Re(f) is the potential value phi, Im(f) the stream value psi.  Each doublet
makes the circle of radius ``r_h`` around the obstacle position ``c_h`` a
flow boundary (exactly for one disk, approximately when several disks are
superposed), so agents sliding along psi-level curves never cross it.

Positions are complex numbers in meters; angles in radians.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .errors import (
    InsideCylinderWarning,
    NoConvergence,
    OverlappingDisksWarning,
    RootInsideCylinder,
    SingularPoint,
)

CENTER_TOLERANCE = 1e-9   # SingularPoint raised within this distance of a center
DISK_SLACK = 1e-12        # membership is strict: inside iff dist < radius - slack
NEWTON_MAX_ITER = 100
NEWTON_TOLERANCE = 1e-10  # convergence contract on |f(z) - target|
_POLISH_FACTOR = 1e-14    # keep polishing below the contract while steps improve
_MAX_HALVINGS = 8
_RESTART_NUDGE = 1e-3
_MAX_RESTARTS = 4

_INSIDE_MSG = "field evaluated inside an excluded disk"
_OVERLAP_MSG = "excluded disks overlap; boundary streamlines are approximate"


@dataclass(frozen=True)
class Singularity:
    """Excluded disk: ``center`` is the obstacle position, ``radius`` its size."""

    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError(f"singularity radius must be > 0, got {self.radius}")
        if not (math.isfinite(self.center.real) and math.isfinite(self.center.imag)):
            raise ValueError(f"singularity center must be finite, got {self.center}")


@dataclass(frozen=True)
class PotentialStreamPair:
    """Potential value phi and stream value psi at one query point (meters)."""

    phi: float
    psi: float

    @property
    def as_complex(self) -> complex:
        return complex(self.phi, self.psi)


@dataclass(frozen=True)
class FlowField:
    """Immutable flow field; all operations are pure functions of the inputs."""

    theta: float = 0.0
    beta: int = 1
    singularities: tuple[Singularity, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "singularities", tuple(self.singularities))
        if self.beta not in (0, 1):
            raise ValueError(f"beta must be 0 or 1, got {self.beta}")
        sings = self.singularities
        for i in range(len(sings)):
            for k in range(i + 1, len(sings)):
                gap = abs(sings[i].center - sings[k].center)
                if gap < sings[i].radius + sings[k].radius - DISK_SLACK:
                    warnings.warn(_OVERLAP_MSG, OverlappingDisksWarning, stacklevel=2)
                    return

    @property
    def effective_beta(self) -> int:
        """The transform degenerates to f == 0 when beta=1 with no doublets;
        an empty singularity list therefore forces identity flow."""
        return self.beta if self.singularities else 0

    # -- membership tests ---------------------------------------------------

    def inside_any_disk(self, z: complex) -> bool:
        if self.effective_beta == 0:
            return False
        return any(abs(z - s.center) < s.radius - DISK_SLACK for s in self.singularities)

    def disk_clearance(self, z: complex) -> float:
        """Signed distance to the nearest disk surface (+inf with no disks)."""
        if self.effective_beta == 0:
            return math.inf
        return min(abs(z - s.center) - s.radius for s in self.singularities)

    def _guard(self, z: complex, warn: bool = True) -> None:
        if self.effective_beta == 0:
            return
        for s in self.singularities:
            dist = abs(z - s.center)
            if dist <= CENTER_TOLERANCE:
                raise SingularPoint(f"point {z} is at singularity center {s.center}")
            if warn and dist < s.radius - DISK_SLACK:
                warnings.warn(_INSIDE_MSG, InsideCylinderWarning, stacklevel=3)

    # -- forward map ----------------------------------------------------------

    def _transform(self, z: complex) -> complex:
        rot = cmath.exp(-1j * self.theta)
        if self.effective_beta == 0:
            return z * rot
        total = 0j
        try:
            for s in self.singularities:
                d = (z - s.center) * rot
                total += d + (s.radius * s.radius) / d
        except ZeroDivisionError:
            return complex(math.inf, math.inf)
        return total

    def _transform_derivative(self, z: complex) -> complex:
        rot = cmath.exp(-1j * self.theta)
        if self.effective_beta == 0:
            return rot
        total = 0j
        try:
            for s in self.singularities:
                d = (z - s.center) * rot
                total += 1.0 - (s.radius * s.radius) / (d * d)
        except ZeroDivisionError:
            return complex(math.inf, math.inf)
        return rot * total

    def evaluate(self, z: complex) -> PotentialStreamPair:
        """Map a position to its (phi, psi) pair.

        Raises SingularPoint within 1e-9 m of a center; warns (and still
        evaluates) inside a disk so callers can reject.
        """
        self._guard(z)
        f = self._transform(z)
        return PotentialStreamPair(f.real, f.imag)

    def derivative(self, z: complex) -> complex:
        """Analytic df/dz; conj(derivative) is the local flow velocity."""
        self._guard(z, warn=False)
        return self._transform_derivative(z)

    # -- inverse map ----------------------------------------------------------

    def invert(self, target: complex, guess: complex,
               max_iter: int = NEWTON_MAX_ITER) -> complex:
        """Find z outside all disks with f(z) = target, by damped Newton.

        Starts from ``guess`` (normally the agent's current position, which
        selects the physically continuous branch of the rational inverse).
        Iterates that enter a disk are rejected: interior roots are the
        non-physical mirror images of the doublets.  When rejection stalls
        the iteration, restarts from the guess nudged along the local
        tangent direction.
        """
        for attempt in range(_MAX_RESTARTS + 1):
            start = self._nudged(guess, attempt)
            z, residual, ok = self._newton(target, start, max_iter, reject_disks=True)
            if ok:
                return z
        # Diagnose: does the unconstrained iteration land inside a disk?
        z, residual, ok = self._newton(target, guess, max_iter, reject_disks=False)
        if ok and self.inside_any_disk(z):
            raise RootInsideCylinder(
                f"inversion of {target} from {guess} only reaches a root inside a disk")
        raise NoConvergence(
            f"inversion of {target} from {guess} stalled at residual {residual:.3e}")

    def _nudged(self, guess: complex, attempt: int) -> complex:
        if attempt == 0:
            return guess
        d = self._transform_derivative(guess)
        mag = abs(d)
        if math.isfinite(mag) and mag > 1e-14:
            direction = d.conjugate() / mag
        else:
            direction = cmath.exp(1j * self.theta)
        return guess + attempt * _RESTART_NUDGE * direction

    def _newton(self, target: complex, z0: complex, max_iter: int,
                reject_disks: bool):
        z = z0
        if reject_disks and self.inside_any_disk(z):
            return z, math.inf, False
        fz = self._transform(z)
        res = abs(fz - target)
        floor = _POLISH_FACTOR * max(1.0, abs(target))
        for _ in range(max_iter):
            if res <= floor or not math.isfinite(res):
                break
            d = self._transform_derivative(z)
            if not math.isfinite(abs(d)) or abs(d) < 1e-14:
                break
            step = (fz - target) / d
            lam = 1.0
            advanced = False
            for _halving in range(_MAX_HALVINGS + 1):
                cand = z - lam * step
                if reject_disks and self.inside_any_disk(cand):
                    lam *= 0.5
                    continue
                f_cand = self._transform(cand)
                r_cand = abs(f_cand - target)
                if r_cand < res:
                    z, fz, res = cand, f_cand, r_cand
                    advanced = True
                    break
                lam *= 0.5
            if not advanced:
                break
        ok = res <= NEWTON_TOLERANCE and not (reject_disks and self.inside_any_disk(z))
        return z, res, ok

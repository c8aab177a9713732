"""Pseudohyperbolic geometry on the open unit disk.

Points of the disk are plain ``complex`` numbers.  Everything here is pure
and stateless; inputs on or outside the unit circle are rejected rather
than clamped, so boundary behaviour is always probed through explicit
radius parameters.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

# Points with |z| >= 1 - BOUNDARY_MARGIN are treated as boundary points and
# rejected; near-boundary evaluation must go through radius parameters.
BOUNDARY_MARGIN = 1e-14

__all__ = [
    "BOUNDARY_MARGIN",
    "EuclideanDisk",
    "StolzDomain",
    "ensure_in_disk",
    "pseudo_disk",
    "rho",
    "stolz_contains",
]


def ensure_in_disk(z: complex, name: str = "z") -> complex:
    """Validate that ``z`` lies strictly inside the unit disk."""
    z = complex(z)
    if abs(z) >= 1.0 - BOUNDARY_MARGIN:
        raise ValueError(f"{name} = {z} is not strictly inside the unit disk")
    return z


def rho(z: complex, w: complex) -> float:
    """Pseudohyperbolic distance |(z - w) / (1 - conj(w) z)|."""
    z = ensure_in_disk(z, "z")
    w = ensure_in_disk(w, "w")
    return abs((z - w) / (1.0 - w.conjugate() * z))


@dataclass(frozen=True)
class EuclideanDisk:
    """Disk {z : |z - center| < radius} contained in the closed unit disk."""

    center: complex
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if abs(self.center) + self.radius > 1.0 + 1e-12:
            raise ValueError("disk extends outside the closed unit disk")

    def contains(self, z: complex) -> bool:
        return abs(complex(z) - self.center) < self.radius

    def boundary_point(self, angle: float) -> complex:
        return self.center + self.radius * cmath.exp(1j * angle)


@dataclass(frozen=True)
class StolzDomain:
    """Nontangential approach region with vertex on the unit circle.

    The domain with vertex ``xi`` (|xi| = 1) and aperture ``eta`` > 1 is the
    set of z in the disk with |1 - conj(xi) z| <= eta (1 - |z|).
    """

    vertex: complex
    aperture: float

    def __post_init__(self) -> None:
        if abs(abs(self.vertex) - 1.0) > 1e-12:
            raise ValueError(f"vertex must be unimodular, got |xi| = {abs(self.vertex)}")
        if not self.aperture > 1.0:
            raise ValueError(f"aperture must exceed 1, got {self.aperture}")

    def contains(self, z: complex) -> bool:
        return stolz_contains(self, z)

    def max_angle(self, modulus: float) -> float:
        """Largest |t| with modulus * exp(i (arg vertex + t)) still inside.

        Solves |1 - m e^{it}|^2 <= eta^2 (1 - m)^2 for cos t.
        """
        if not 0.0 < modulus < 1.0:
            raise ValueError(f"modulus must be in (0, 1), got {modulus}")
        m, eta = modulus, self.aperture
        bound = (1.0 + m * m - (eta * (1.0 - m)) ** 2) / (2.0 * m)
        if bound <= -1.0:
            return math.pi
        return math.acos(min(bound, 1.0))


def pseudo_disk(a: complex, R: float) -> EuclideanDisk:
    """Euclidean realization of the pseudohyperbolic ball {z : rho(z, a) < R}.

    The radius is R (1 - |a|^2) / (1 - R^2 |a|^2); the center is the image
    a (1 - R^2) / (1 - R^2 |a|^2) of a under the Moebius contraction, which
    the test suite validates against membership sampling.
    """
    a = ensure_in_disk(a, "a")
    if not 0.0 < R < 1.0:
        raise ValueError(f"R must be in (0, 1), got {R}")
    aa = abs(a) ** 2
    denom = 1.0 - R * R * aa
    center = a * (1.0 - R * R) / denom
    radius = R * (1.0 - aa) / denom
    return EuclideanDisk(center=center, radius=radius)


def stolz_contains(dom: StolzDomain, z: complex) -> bool:
    """True iff |1 - conj(vertex) z| <= aperture (1 - |z|)."""
    z = ensure_in_disk(z, "z")
    return abs(1.0 - dom.vertex.conjugate() * z) <= dom.aperture * (1.0 - abs(z))

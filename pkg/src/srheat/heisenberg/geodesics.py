"""Geodesics leaving the plane z = 0 in the first Heisenberg group.

The frame is X1 = d_x - (y/2) d_z, X2 = d_y + (x/2) d_z. A unit-speed
geodesic starting at (x0, y0, 0) with initial covector in the annihilator
of the plane turns on a circle of diameter r0 = |(x0, y0)| through the
z-axis, which it reaches at the focal time r0 * pi / 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    z: float

    @classmethod
    def from_cylindrical(cls, r: float, phi: float, z: float) -> "Point":
        return cls(r * math.cos(phi), r * math.sin(phi), z)

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x)

    def cylindrical(self):
        return self.r, self.phi, self.z

    def dilate(self, t: float) -> "Point":
        """The anisotropic dilation (tx, ty, t^2 z)."""
        return Point(t * self.x, t * self.y, t * t * self.z)

    def as_tuple(self):
        return (self.x, self.y, self.z)


def _start_radius(x0: float, y0: float) -> float:
    r0 = math.hypot(x0, y0)
    if r0 == 0.0:
        raise ValueError("the origin is characteristic; no geodesic leaves it")
    return r0


def geodesic_point(x0: float, y0: float, t: float) -> Point:
    """Position at time t of the geodesic from (x0, y0, 0) into z > 0."""
    r0 = _start_radius(x0, y0)
    if t < 0:
        raise ValueError("time must be non-negative")
    theta = 2.0 * t / r0
    c, s = math.cos(theta), math.sin(theta)
    x = 0.5 * (x0 * (1.0 + c) - y0 * s)
    y = 0.5 * (y0 * (1.0 + c) + x0 * s)
    z = 0.125 * r0 * r0 * (theta + s)
    return Point(x, y, z)


def geodesic_velocity(x0: float, y0: float, t: float):
    """Time derivative of :func:`geodesic_point`."""
    r0 = _start_radius(x0, y0)
    theta = 2.0 * t / r0
    c, s = math.cos(theta), math.sin(theta)
    dx = (-x0 * s - y0 * c) / r0
    dy = (-y0 * s + x0 * c) / r0
    dz = 0.25 * r0 * (1.0 + c)
    return dx, dy, dz


def focal_time(r0: float, k: int = 0) -> float:
    return r0 * (math.pi / 2 + k * math.pi)


def exp_jacobian_det(r0: float, t: float) -> float:
    """Determinant of the differential of the exponential map from the plane."""
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    theta = 2.0 * t / r0
    return 0.25 * (r0 * (1.0 + math.cos(theta)) + t * math.sin(theta))

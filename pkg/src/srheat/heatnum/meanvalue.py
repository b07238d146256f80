"""Second-derivative identity for integrals over the sets {delta > r}.

With F(r) = integral of v over Omega(r) = {delta > r},

    F''(r) = integral_{Omega(r)} Delta v  -  integral_{dOmega(r)} v Delta(delta) dsigma.

For the interval (0, L) the boundary is two points and Delta(delta) = 0.
For the disk of radius R, Omega(r) is the disk of radius R - r and
Delta(delta) = -1/(R - r) on its boundary circle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import integrate

MV_TOL = 1e-13


@dataclass(frozen=True)
class RadialTestFunction:
    """v and its Laplacian, both as functions of the radial coordinate.

    For the disk the coordinate is the distance from the centre; for the
    interval it is the position x in (0, L).
    """

    value: Callable[[float], float]
    laplacian: Callable[[float], float]
    name: str = "v"


def polynomial_test_function(geometry: str, coeffs: Sequence[float]) -> RadialTestFunction:
    """v = sum_m c_m rho^m with its exact Laplacian in the given geometry."""
    cs = [float(c) for c in coeffs]

    def value(x):
        return sum(c * x ** m for m, c in enumerate(cs))

    if geometry == "disk":
        # Delta rho^m = m^2 rho^(m-2); odd m = 1 is singular at the centre
        if len(cs) > 1 and cs[1] != 0:
            raise ValueError("rho^1 is not smooth at the disk centre")
        lap = lambda x: sum(c * m * m * x ** (m - 2) for m, c in enumerate(cs) if m >= 2)
    elif geometry == "interval":
        lap = lambda x: sum(c * m * (m - 1) * x ** (m - 2) for m, c in enumerate(cs) if m >= 2)
    else:
        raise ValueError(f"unknown geometry {geometry!r}")
    return RadialTestFunction(value, lap, f"poly{cs}")


class _Geometry:
    def __init__(self, name: str, size: float):
        if size <= 0:
            raise ValueError("geometry size must be positive")
        self.name, self.size = name, size

    def reach(self) -> float:
        # Omega(r) is non-empty for r below this
        return self.size if self.name == "disk" else self.size / 2

    def mass(self, v: RadialTestFunction, r: float, tol: float) -> float:
        if self.name == "disk":
            rho = self.size - r
            return 2 * math.pi * integrate(lambda p: v.value(p) * p, 0.0, rho, tol)
        return integrate(v.value, r, self.size - r, tol)

    def rhs(self, v: RadialTestFunction, r: float, tol: float) -> float:
        if self.name == "disk":
            rho = self.size - r
            interior = 2 * math.pi * integrate(lambda p: v.laplacian(p) * p, 0.0, rho, tol)
            # - (length 2 pi rho) * v(rho) * (-1/rho)
            return interior + 2 * math.pi * v.value(rho)
        return integrate(v.laplacian, r, self.size - r, tol)


def mean_value_residual(geometry: str, v: RadialTestFunction, r: float, size: float = 1.0,
                        h: float | None = None, tol: float = MV_TOL) -> float:
    """|F''(r) - (int Delta v - int v Delta(delta))| for ``geometry`` of ``size``.

    F'' uses a central second difference with one Richardson step
    (h and h/2), so polynomial F of degree <= 5 is differentiated exactly.
    """
    geo = _Geometry(geometry, size) if geometry in ("disk", "interval") else None
    if geo is None:
        raise ValueError(f"unknown geometry {geometry!r}")
    if h is None:
        h = 1e-2 * size
    if not 0 <= r < geo.reach():
        raise ValueError("r outside the smooth tube")
    if r - h < 0 or r + h >= geo.reach():
        raise ValueError("difference stencil leaves the smooth tube; reduce h")
    F = lambda x: geo.mass(v, x, tol)
    f0 = F(r)
    if h * h < 1e4 * np.finfo(float).eps * max(abs(f0), 1.0):
        raise ValueError(f"step h = {h!r} underflows the second difference")

    def second(step):
        return (F(r + step) - 2 * f0 + F(r - step)) / (step * step)

    d2 = (4 * second(h / 2) - second(h)) / 3
    return abs(d2 - geo.rhs(v, r, tol))

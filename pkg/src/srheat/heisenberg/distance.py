"""Distance from the plane Sigma = {z = 0} in the first Heisenberg group.

Off the z-axis a point at height z > 0 and radius r is reached from the
plane at time ``t = r * t_fun(xi, y)`` where ``xi = z / r**2`` and ``y``
solves ``k_fun(xi, y) = branch``. Branch 0 always exists and is the
minimiser; branch 1 exists only for large ``xi`` and is compared against
branch 0 whenever it does. On the axis the distance is sqrt(2 pi |z|).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .geodesics import Point, geodesic_point

RESIDUAL_TOL = 1e-14
AXIS_RTOL = 1e-10


class NoBranchError(ValueError):
    """The requested branch of k(xi, y) = branch has no solution."""


class SolverError(RuntimeError):
    """The bracketed root solve failed to reach the residual tolerance."""


@dataclass(frozen=True)
class GeodesicFoot:
    x0: float
    y0: float
    time: float
    branch_k: int = 0

    def __post_init__(self):
        if self.x0 == 0.0 and self.y0 == 0.0:
            raise ValueError("a geodesic foot cannot be the characteristic origin")
        if self.time < 0:
            raise ValueError("travel time must be non-negative")


@dataclass(frozen=True)
class DistanceResult:
    value: float
    foot: Optional[GeodesicFoot]
    on_axis: bool


def k_fun(xi: float, y: float) -> float:
    one_y2 = 1.0 + y * y
    return (4.0 * xi + y + one_y2 * math.atan(y)) / (one_y2 * math.pi)


def _k_prime(xi: float, y: float) -> float:
    one_y2 = 1.0 + y * y
    g = 4.0 * xi + y + one_y2 * math.atan(y)
    dg = 2.0 + 2.0 * y * math.atan(y)
    return (dg * one_y2 - 2.0 * y * g) / (one_y2 * one_y2 * math.pi)


def t_fun(xi: float, y: float) -> float:
    return (4.0 * xi + y) / math.sqrt(1.0 + y * y)


def branch_one_exists(xi: float) -> bool:
    # k(xi, .) peaks at y = 1/(4 xi) with value (4 xi + arctan(1/(4 xi))) / pi
    return (4.0 * xi + math.atan(1.0 / (4.0 * xi))) / math.pi >= 1.0


def _polish(xi: float, y: float, target: int, tol: float) -> float:
    best, best_res = y, abs(k_fun(xi, y) - target)
    for _ in range(8):
        if best_res <= tol:
            break
        d = _k_prime(xi, best)
        if d == 0.0:
            break
        cand = best - (k_fun(xi, best) - target) / d
        res = abs(k_fun(xi, cand) - target)
        if res >= best_res:
            break
        best, best_res = cand, res
    return best


def _residual_scale(xi: float, y: float) -> float:
    # rounding floor of the k evaluation: 4 xi and (1+y^2) arctan y cancel
    one_y2 = 1.0 + y * y
    return 8.0 * np.finfo(float).eps * (4.0 * xi + abs(y) + one_y2 * abs(math.atan(y))) / (one_y2 * math.pi)


def y0_solve(xi: float, branch_k: int = 0, tol: float = RESIDUAL_TOL) -> float:
    """Root of k(xi, y) = branch_k on the documented bracket.

    Branch 0 lies in (-4 xi, 0). Branch 1 lies in (1/(4 xi), y_cap) where
    the cap grows geometrically until k drops below 1.
    """
    if not xi > 0:
        raise ValueError("xi must be positive")
    if branch_k == 0:
        lo, hi = -4.0 * xi, 0.0
    elif branch_k == 1:
        if not branch_one_exists(xi):
            raise NoBranchError(f"k(xi, y) = 1 has no solution at xi = {xi!r}")
        lo = hi = 1.0 / (4.0 * xi)
        while k_fun(xi, hi) >= 1.0:
            hi *= 2.0
            if hi > 1e300:
                raise SolverError("branch-1 bracket did not close")
    else:
        raise ValueError("only branches 0 and 1 are supported")
    f = lambda y: k_fun(xi, y) - branch_k
    if f(lo) == 0.0:
        return lo
    y = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    y = _polish(xi, y, branch_k, tol)
    res = abs(f(y))
    if res > max(tol, _residual_scale(xi, y)):
        raise SolverError(f"residual {res:.3e} above tolerance at xi = {xi!r}")
    return y


def _axis_threshold(z: float) -> float:
    return AXIS_RTOL * max(1.0, math.sqrt(abs(z)))


def _foot(p: Point, t: float) -> GeodesicFoot:
    # endpoint radius r = r0 cos(t / r0); solve a * r / t = cos(a) for a = t / r0,
    # which stays well conditioned as a -> 0
    if t < 1e-8 * p.r:
        # cos(a) = 1 to double precision
        a, r0 = t / p.r, p.r
    else:
        ratio = p.r / t
        a = brentq(lambda a: a * ratio - math.cos(a), 0.0, math.pi / 2,
                   xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        r0 = t / a
    phi0 = p.phi - a
    x0, y0 = r0 * math.cos(phi0), r0 * math.sin(phi0)
    return GeodesicFoot(x0, y0, t, 0)


def distance_to_plane(p: Point, tol: float = RESIDUAL_TOL,
                      check_branches: bool = True) -> DistanceResult:
    """Sub-Riemannian distance from ``p`` to the plane z = 0."""
    r, z = p.r, p.z
    if z == 0.0:
        foot = GeodesicFoot(p.x, p.y, 0.0) if r > 0 else None
        return DistanceResult(0.0, foot, r == 0.0)
    if r < _axis_threshold(z):
        return DistanceResult(math.sqrt(2.0 * math.pi * abs(z)), None, True)
    # reflection (x, y, z) -> (x, -y, -z) is an isometry fixing the plane
    sign = 1.0 if z > 0 else -1.0
    q = Point(p.x, sign * p.y, abs(z))
    xi = q.z / (r * r)
    y0 = y0_solve(xi, 0, tol)
    t0 = r * t_fun(xi, y0)
    if check_branches and branch_one_exists(xi):
        t1 = r * t_fun(xi, y0_solve(xi, 1, tol))
        if t1 < t0:
            raise SolverError(f"branch 1 shorter than branch 0 at xi = {xi!r}")
    foot = _foot(q, t0)
    if sign < 0:
        foot = GeodesicFoot(foot.x0, -foot.y0, foot.time, foot.branch_k)
    return DistanceResult(t0, foot, False)


def distance(x: float, y: float, z: float) -> float:
    return distance_to_plane(Point(x, y, z)).value


def foot_endpoint(foot: GeodesicFoot, z_sign: float = 1.0) -> Point:
    """Endpoint of the geodesic described by ``foot`` (on the side of ``z_sign``)."""
    if z_sign >= 0:
        return geodesic_point(foot.x0, foot.y0, foot.time)
    q = geodesic_point(foot.x0, -foot.y0, foot.time)
    return Point(q.x, -q.y, -q.z)

"""Heat content of the interval (eigen-series) and the disk (Crank-Nicolson).

Both solve u_t = Delta u with u = 1 at t = 0 and u = 0 on the boundary,
and report Q(t) = integral of u over the domain.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_banded

# exp(-TAIL_EXPONENT) times the first term is below double rounding of Q
TAIL_EXPONENT = 45.0
MAX_MODES = 50_000_000


def interval_heat_content(L: float, t: float) -> float:
    """Dirichlet eigen-series sum_{n odd} 8L/(n pi)^2 exp(-(n pi)^2 t / L^2)."""
    if not (L > 0 and t > 0):
        raise ValueError("L and t must be positive")
    # last kept mode has (n pi / L)^2 t >= TAIL_EXPONENT; the tail beyond is
    # bounded by a geometric series of ratio < exp(-TAIL_EXPONENT)
    n_max = int(math.ceil(L / math.pi * math.sqrt(TAIL_EXPONENT / t))) + 1
    if n_max > MAX_MODES:
        raise ValueError(f"t = {t!r} needs {n_max} modes; use a larger t")
    n = np.arange(n_max | 1, 0, -2, dtype=float)
    k = n * math.pi / L
    terms = 8.0 / (L * k * k) * np.exp(-k * k * t)
    return math.fsum(terms)


def default_times(scale: float, count: int = 12, t_max_factor: float = 1e-2) -> np.ndarray:
    """Geometric sample times t_max * 4^-i, returned increasing."""
    if count < 1:
        raise ValueError("need at least one sample time")
    t_max = t_max_factor * scale * scale
    return t_max * 4.0 ** -np.arange(count - 1, -1, -1, dtype=float)


@dataclass
class HeatContentSamples:
    t: np.ndarray
    Q: np.ndarray
    geometry: str
    params: Dict[str, object] = field(default_factory=dict)
    u_min: float = 0.0
    u_max: float = 1.0
    centers: Optional[np.ndarray] = None
    profiles: Optional[np.ndarray] = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.Q = np.asarray(self.Q, dtype=float)
        if self.t.shape != self.Q.shape:
            raise ValueError("t and Q must have equal length")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("sample times must be strictly increasing")

    def is_nonincreasing(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.diff(self.Q) <= atol))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t", "Q"))
        for t, q in zip(self.t, self.Q):
            w.writerow((repr(float(t)), repr(float(q))))
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"geometry": self.geometry, "params": dict(self.params),
                "t": [float(v) for v in self.t], "Q": [float(v) for v in self.Q],
                "u_min": float(self.u_min), "u_max": float(self.u_max)}


def interval_samples(L: float, t_list: Optional[Sequence[float]] = None) -> HeatContentSamples:
    t = default_times(L) if t_list is None else np.sort(np.asarray(t_list, dtype=float))
    return HeatContentSamples(t, [interval_heat_content(L, v) for v in t], "interval",
                              {"L": L})


@dataclass(frozen=True)
class RadialMesh:
    """Finite-volume cells on [0, R]: faces increasing from 0 to R."""

    faces: np.ndarray
    centers: np.ndarray

    @property
    def areas(self) -> np.ndarray:
        return math.pi * (self.faces[1:] ** 2 - self.faces[:-1] ** 2)

    @classmethod
    def graded(cls, R: float, n: int, beta: float) -> "RadialMesh":
        # distance to the boundary d(s) = R sinh(beta s) / sinh(beta), s uniform
        s = np.linspace(0.0, 1.0, n + 1)
        d = R * np.sinh(beta * s) / math.sinh(beta)
        faces = (R - d)[::-1]
        faces[0], faces[-1] = 0.0, R
        sc = (np.arange(n) + 0.5) / n
        centers = (R - R * np.sinh(beta * sc) / math.sinh(beta))[::-1]
        return cls(faces, centers)

    @classmethod
    def uniform(cls, R: float, h: float) -> "RadialMesh":
        n = int(round(R / h))
        if n < 2 or abs(n * h - R) > 1e-9 * R:
            raise ValueError("uniform mesh needs R to be a multiple of h")
        faces = h * np.arange(n + 1, dtype=float)
        return cls(faces, faces[:-1] + 0.5 * h)


def _operator_bands(mesh: RadialMesh) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tridiagonal (lower, diag, upper) of the discrete Laplacian, u = 0 at r = R."""
    f, c, a = mesh.faces, mesh.centers, mesh.areas
    n = len(c)
    # conductances 2 pi rho_f / (distance between centers); zero at the axis
    g = np.zeros(n + 1)
    g[1:n] = 2.0 * math.pi * f[1:n] / np.diff(c)
    g[n] = 2.0 * math.pi * f[n] / (f[n] - c[-1])
    lower = g[1:n] / a[1:]
    upper = g[1:n] / a[:-1]
    diag = -(g[:n] + g[1:]) / a
    return lower, diag, upper


def _time_levels(t_samples: np.ndarray, per_quarter: int, pad: int) -> np.ndarray:
    t_hi = float(t_samples[-1])
    t_lo = float(t_samples[0]) * 4.0 ** -pad
    count = int(math.ceil(math.log(t_hi / t_lo, 4.0) * per_quarter))
    base = t_lo * (t_hi / t_lo) ** (np.arange(count + 1) / count)
    levels = np.union1d(base, t_samples)
    # drop base levels that nearly coincide with a sample time
    keep = np.ones(len(levels), bool)
    for t in t_samples:
        close = np.abs(levels - t) <= 1e-9 * t
        close[np.searchsorted(levels, t)] = False
        keep &= ~close
    return levels[keep]


def disk_heat_content(R: float = 1.0, t_list: Optional[Sequence[float]] = None,
                      grid: Tuple[int, int] = (1000, 48), *, beta: float = 10.0,
                      mesh: Optional[RadialMesh] = None, startup_steps: int = 4,
                      pad: int = 10, keep_profiles: bool = False) -> HeatContentSamples:
    """Crank-Nicolson solve of u_t = u_rr + u_r/r on the disk of radius R.

    ``grid = (n_r, n_t)``: n_r finite-volume cells graded towards r = R and
    n_t time steps per factor-4 interval of geometric time levels. The first
    ``startup_steps`` steps are implicit Euler to damp the boundary jump.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    n_r, n_t = grid
    if n_t < 1:
        raise ValueError("need at least one step per time interval")
    t_samples = default_times(R) if t_list is None else np.sort(np.asarray(t_list, float))
    if t_samples[0] <= 0:
        raise ValueError("sample times must be positive")
    if mesh is None:
        if n_r < 4:
            raise ValueError("need at least four cells")
        mesh = RadialMesh.graded(R, n_r, beta)
    elif abs(mesh.faces[-1] - R) > 1e-12 * R:
        raise ValueError("mesh does not end at R")
    lower, diag, upper = _operator_bands(mesh)
    n = len(mesh.centers)
    areas = mesh.areas
    levels = _time_levels(t_samples, n_t, pad)

    u = np.ones(n)
    u_min, u_max = 1.0, 1.0
    ab = np.empty((3, n))
    t_prev = 0.0
    out_q, profiles = [], []
    sample_iter = iter(t_samples)
    next_sample = next(sample_iter)
    for step, t in enumerate(levels):
        dt = t - t_prev
        theta = 1.0 if step < startup_steps else 0.5
        ab[0, 1:] = -theta * dt * upper
        ab[0, 0] = 0.0
        ab[1] = 1.0 - theta * dt * diag
        ab[2, :-1] = -theta * dt * lower
        ab[2, -1] = 0.0
        rhs = u.copy()
        if theta < 1.0:
            w = (1.0 - theta) * dt
            rhs += w * diag * u
            rhs[1:] += w * lower * u[:-1]
            rhs[:-1] += w * upper * u[1:]
        u = solve_banded((1, 1), ab, rhs, check_finite=False)
        u_min, u_max = min(u_min, u.min()), max(u_max, u.max())
        t_prev = t
        if next_sample is not None and abs(t - next_sample) <= 1e-9 * next_sample:
            out_q.append(math.fsum(areas * u))
            if keep_profiles:
                profiles.append(u.copy())
            next_sample = next(sample_iter, None)
    params = {"R": R, "n_r": n, "n_t": n_t, "beta": beta, "startup_steps": startup_steps,
              "pad": pad, "steps": len(levels)}
    return HeatContentSamples(t_samples, out_q, "disk", params, float(u_min), float(u_max),
                              mesh.centers.copy(),
                              np.array(profiles) if keep_profiles else None)

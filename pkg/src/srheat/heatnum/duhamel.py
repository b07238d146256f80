"""Neumann heat kernel on the half-line and Duhamel representations.

All kernel integrals are evaluated after the substitution s = r + 2 sqrt(t) u
(and its reflection), which turns the Gaussian into exp(-u^2) and keeps the
integrands bounded as t -> 0. Time integrals against e(t - tau, r, 0) use
t - tau = s^2 to remove the inverse square-root singularity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

from .quadrature import DEFAULT_LIMIT, DEFAULT_TOL, integrate

# exp(-U_CUT^2) is far below double precision
U_CUT = 9.0
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


def neumann_kernel(t: float, r: float, s: float) -> float:
    if t <= 0:
        raise ValueError("kernel time must be positive")
    c = 1.0 / math.sqrt(4.0 * math.pi * t)
    return c * (math.exp(-(r - s) ** 2 / (4.0 * t)) + math.exp(-(r + s) ** 2 / (4.0 * t)))


def kernel_apply(t: float, r: float, g: Callable[[float], float], support: float,
                 tol: float = DEFAULT_TOL, limit: int = DEFAULT_LIMIT) -> float:
    """integral_0^support e(t, r, s) g(s) ds."""
    if t <= 0:
        raise ValueError("kernel time must be positive")
    w = 2.0 * math.sqrt(t)
    total = 0.0
    # direct image: s = r + w u
    lo, hi = -r / w, min(U_CUT, (support - r) / w)
    if hi > lo:
        total += integrate(lambda u: math.exp(-u * u) * g(r + w * u), lo, hi, tol / 2, limit)
    # reflected image: s = w u - r
    lo, hi = r / w, min(U_CUT, (support + r) / w)
    if hi > lo:
        total += integrate(lambda u: math.exp(-u * u) * g(w * u - r), lo, hi, tol / 2, limit)
    return _INV_SQRT_PI * total


def _zero_source(t, r):
    return 0.0


def _zero(x):
    return 0.0


@dataclass(frozen=True)
class HalfLineProblem:
    """L v = f on (0, inf) with L = d_t - d_r^2, v(0, r) = v0, d_r v(t, 0) = v1.

    ``support`` bounds the r-support of f(t, .) and v0. For the iterated
    formula, ``lf[j]`` is L^j f as a function of (t, r) (so ``lf[0]`` is f)
    and ``lf_flux[j]`` is d_r L^j f(t, 0) as a function of t.
    """

    f: Callable[[float, float], float] = _zero_source
    v0: Callable[[float], float] = _zero
    v1: Callable[[float], float] = _zero
    support: float = 10.0
    lf: Sequence[Callable[[float, float], float]] = field(default_factory=tuple)
    lf_flux: Sequence[Callable[[float], float]] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.support > 0:
            raise ValueError("support radius must be positive")


def duhamel_eval(p: HalfLineProblem, t: float, r: float,
                 tol: float = DEFAULT_TOL, limit: int = DEFAULT_LIMIT) -> float:
    """Solution v(t, r) of the half-line problem by Duhamel's formula."""
    if t <= 0:
        raise ValueError("t must be positive")
    if r < 0:
        raise ValueError("r must be non-negative")
    part = tol / 3
    initial = kernel_apply(t, r, p.v0, p.support, part, limit)
    source = integrate(
        lambda sig: kernel_apply(sig, r, lambda s: p.f(t - sig, s), p.support,
                                 part / (4 * max(t, 1.0)), limit) if sig > 0 else p.f(t, r),
        0.0, t, part, limit)
    flux = _flux_integral(lambda tau: p.v1(tau), t, r, 0, part, limit)
    return initial + source - flux


def _flux_integral(g: Callable[[float], float], t: float, r: float, power: int,
                   tol: float, limit: int) -> float:
    """integral_0^t e(t - tau, r, 0) g(tau) (t - tau)^power d tau."""
    def integrand(s):
        if s == 0.0:
            return 0.0 if (r > 0 or power > 0) else g(t)
        return math.exp(-r * r / (4 * s * s)) * s ** (2 * power) * g(t - s * s)
    return 2.0 * _INV_SQRT_PI * integrate(integrand, 0.0, math.sqrt(t), tol / 2, limit)


@dataclass(frozen=True)
class IteratedDuhamel:
    value: float
    initial_terms: List[float]
    flux_terms: List[float]
    remainder: float

    @property
    def order_terms(self) -> List[float]:
        return [a - b for a, b in zip(self.initial_terms, self.flux_terms)]

    @property
    def expansion(self) -> float:
        """The sum of all order terms, without the remainder."""
        return math.fsum(self.order_terms)


def iterated_duhamel_eval(p: HalfLineProblem, m: int, t: float,
                          tol: float = DEFAULT_TOL, limit: int = DEFAULT_LIMIT) -> IteratedDuhamel:
    """Depth-m iterated Duhamel expansion of the solution at r = 0.

    Needs ``p.lf[0..m]`` and ``p.lf_flux[0..m-1]``. The remainder is
    (1/m!) int_0^t int_0^inf e(t - tau, r, 0) L^(m+1) F (t - tau)^m dr dtau,
    which is O(t^(m+1)) for data with bounded L^(m+1) F.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if t <= 0:
        raise ValueError("t must be positive")
    if m > 0 and (len(p.lf) < m + 1 or len(p.lf_flux) < m):
        raise ValueError(f"depth {m} needs L^j f for j <= {m} and their fluxes for j < {m}")
    part = tol / (2 * m + 3)
    lf = list(p.lf) or [p.f]

    def data_at_zero(k):
        if k == 0:
            return p.v0
        g = lf[k - 1]
        return lambda s: g(0.0, s)

    def flux_data(k):
        return p.v1 if k == 0 else p.lf_flux[k - 1]

    initial, flux = [], []
    for k in range(m + 1):
        fact = math.factorial(k)
        initial.append(t ** k / fact * kernel_apply(t, 0.0, data_at_zero(k), p.support, part, limit))
        flux.append(_flux_integral(flux_data(k), t, 0.0, k, part * fact, limit) / fact)

    top = lf[m]
    fact = math.factorial(m)

    def outer(sig):
        if sig == 0.0:
            return 0.0 if m > 0 else top(t, 0.0)
        inner = kernel_apply(sig, 0.0, lambda s: top(t - sig, s), p.support,
                             part / (4 * max(t, 1.0)), limit)
        return sig ** m * inner

    remainder = integrate(outer, 0.0, t, part * fact, limit) / fact
    value = math.fsum(initial) - math.fsum(flux) + remainder
    return IteratedDuhamel(value, initial, flux, remainder)

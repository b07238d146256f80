"""Annular integrals of monomial boundary integrands on the punctured plane."""
from __future__ import annotations

import math

from ..symcalc import BoundaryIntegrand

# dsigma = r^2 dr dphi on the plane, in the Heisenberg surface measure
MEASURE_R_POWER = 2


def annulus_integral(c: float, r_power: int, r_min: float, r_max: float) -> float:
    """2 pi |c| * integral_{r_min}^{r_max} r^(r_power + 2) dr."""
    if not 0 < r_min <= r_max:
        raise ValueError("need 0 < r_min <= r_max")
    e = r_power + MEASURE_R_POWER
    if e == -1:
        radial = math.log(r_max / r_min)
    else:
        radial = (r_max ** (e + 1) - r_min ** (e + 1)) / (e + 1)
    return 2.0 * math.pi * abs(c) * radial


def blowup_integral(r_min: float, r_max: float, integrand: BoundaryIntegrand) -> float:
    """Integral of ``|integrand|`` over the annulus r_min < r < r_max."""
    if not integrand.is_monomial():
        raise ValueError("blow-up integral needs a monomial integrand")
    if integrand.is_zero():
        if not 0 < r_min <= r_max:
            raise ValueError("need 0 < r_min <= r_max")
        return 0.0
    return annulus_integral(float(integrand.value()), integrand.power(), r_min, r_max)


def converges_at_origin(r_power: int) -> bool:
    """Whether c r^r_power is integrable near r = 0 for the plane measure."""
    return r_power + MEASURE_R_POWER > -1

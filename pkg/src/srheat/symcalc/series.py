"""Exact function representations used by the evaluation contexts.

HomogeneousSeries
    ``sum_k c_k z**k r**(w - 2k)`` for axisymmetric functions near the
    Heisenberg xy-plane (z > 0). ``trunc`` is the largest ``k`` whose
    coefficient is known exactly; orders above it were dropped.

LaurentRadial
    finite Laurent polynomials ``sum_m c_m r**m``; closed under the disk
    and interval actions, so no truncation is ever needed.

In cylindrical coordinates, for functions of (r, z) only, the frame
X1 = d_x - (y/2) d_z, X2 = d_y + (x/2) d_z gives

    Delta u      = u_rr + u_r / r + (r**2 / 4) u_zz
    g(grad u, grad v) = u_r v_r + (r**2 / 4) u_z v_z

(the mixed d_phi d_z terms vanish on axisymmetric functions).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping


class TruncationError(ArithmeticError):
    """A restriction needed coefficients beyond the stored truncation."""


def _clean(coeffs: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    return {k: Fraction(c) for k, c in sorted(coeffs.items()) if c != 0}


@dataclass(frozen=True)
class HomogeneousSeries:
    weight: int
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)
    trunc: int = 0

    def __post_init__(self):
        kept = {k: c for k, c in _clean(self.coeffs).items() if k <= self.trunc}
        if any(k < 0 for k in kept):
            raise ValueError("z powers must be non-negative")
        object.__setattr__(self, "coeffs", kept)

    @classmethod
    def constant(cls, value, trunc: int) -> "HomogeneousSeries":
        return cls(0, {0: Fraction(value)}, trunc)

    def coefficient(self, k: int) -> Fraction:
        if k > self.trunc:
            raise TruncationError(f"order z^{k} was truncated (trunc={self.trunc})")
        return self.coeffs.get(k, Fraction(0))

    def r_power(self, k: int) -> int:
        return self.weight - 2 * k

    def __add__(self, other: "HomogeneousSeries") -> "HomogeneousSeries":
        if other.weight != self.weight and self.coeffs and other.coeffs:
            raise ValueError("cannot add series of different weights")
        weight = self.weight if self.coeffs else other.weight
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return HomogeneousSeries(weight, out, min(self.trunc, other.trunc))

    def __neg__(self):
        return HomogeneousSeries(self.weight, {k: -c for k, c in self.coeffs.items()},
                                 self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HomogeneousSeries":
        return HomogeneousSeries(self.weight, {k: c * v for k, v in self.coeffs.items()},
                                 self.trunc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, HomogeneousSeries):
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        out: Dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j <= trunc:
                    out[i + j] = out.get(i + j, 0) + a * b
        return HomogeneousSeries(self.weight + other.weight, out, trunc)

    __rmul__ = __mul__

    def boundary_value(self) -> Fraction:
        """Coefficient of r**weight as z -> 0+."""
        if self.trunc < 0:
            raise TruncationError("no exact orders left; raise the truncation")
        return self.coeffs.get(0, Fraction(0))

    def __str__(self):
        if not self.coeffs:
            return f"0 (weight {self.weight}, trunc {self.trunc})"
        body = " + ".join(f"({c}) z^{k} r^{self.r_power(k)}" for k, c in self.coeffs.items())
        return f"{body} + O(z^{self.trunc + 1})"


def hseries_laplacian(u: HomogeneousSeries) -> HomogeneousSeries:
    """Delta u = u_rr + u_r/r + (r^2/4) u_zz; weight drops by 2."""
    out: Dict[int, Fraction] = {}
    for k, c in u.coeffs.items():
        e = u.r_power(k)
        # r-part: (e(e-1) + e) r^(e-2) = e^2 r^(e-2)
        out[k] = out.get(k, 0) + c * e * e
        if k >= 2:
            out[k - 2] = out.get(k - 2, 0) + c * k * (k - 1) / 4
    return HomogeneousSeries(u.weight - 2, out, u.trunc - 2)


def hseries_grad_pair(u: HomogeneousSeries, v: HomogeneousSeries) -> HomogeneousSeries:
    """g(grad u, grad v) = u_r v_r + (r^2/4) u_z v_z."""
    base = min(u.trunc, v.trunc)
    out: Dict[int, Fraction] = {}
    for i, a in u.coeffs.items():
        ei = u.r_power(i)
        for j, b in v.coeffs.items():
            ej = v.r_power(j)
            if ei and ej and i + j <= base:
                out[i + j] = out.get(i + j, 0) + a * b * ei * ej
            if i and j and i + j - 2 <= base - 1:
                out[i + j - 2] = out.get(i + j - 2, 0) + a * b * i * j / 4
    return HomogeneousSeries(u.weight + v.weight - 2, out, base - 1)


@dataclass(frozen=True)
class LaurentRadial:
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(self.coeffs))

    @classmethod
    def constant(cls, value) -> "LaurentRadial":
        return cls({0: Fraction(value)})

    def __add__(self, other: "LaurentRadial") -> "LaurentRadial":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return LaurentRadial(out)

    def __neg__(self):
        return LaurentRadial({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LaurentRadial":
        return LaurentRadial({m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentRadial):
            return NotImplemented
        out: Dict[int, Fraction] = {}
        for m, a in self.coeffs.items():
            for n, b in other.coeffs.items():
                out[m + n] = out.get(m + n, 0) + a * b
        return LaurentRadial(out)

    __rmul__ = __mul__

    def derivative(self) -> "LaurentRadial":
        return LaurentRadial({m - 1: c * m for m, c in self.coeffs.items() if m})

    def evaluate(self, r) -> Fraction:
        r = Fraction(r)
        return sum((c * r ** m for m, c in self.coeffs.items()), Fraction(0))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c}) r^{m}" for m, c in self.coeffs.items())

"""Scalars of the form q * pi**(p/2) with q rational.

Every Gamma ratio produced by the D_k recursion reduces to a rational
multiple of a half-integer power of pi, so this small ring is all the
operator algebra needs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


class MixedPiPowerError(ArithmeticError):
    """Raised when two nonzero scalars with different pi powers are added."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class SqrtPiCoefficient:
    """The exact scalar ``q * pi**(p/2)``.

    ``q`` is kept in lowest terms by :class:`fractions.Fraction`; the zero
    scalar always carries ``p == 0`` so that equality is structural.
    """

    q: Fraction
    p: int = 0

    def __post_init__(self):
        object.__setattr__(self, "q", as_fraction(self.q))
        if self.q == 0:
            object.__setattr__(self, "p", 0)
        elif not isinstance(self.p, int):
            raise TypeError("pi half-power must be an integer")

    @classmethod
    def zero(cls) -> "SqrtPiCoefficient":
        return cls(Fraction(0), 0)

    @classmethod
    def one(cls) -> "SqrtPiCoefficient":
        return cls(Fraction(1), 0)

    def is_zero(self) -> bool:
        return self.q == 0

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SqrtPiCoefficient(other)
        if not isinstance(other, SqrtPiCoefficient):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.p != other.p:
            raise MixedPiPowerError(
                f"cannot add pi^({self.p}/2) and pi^({other.p}/2) terms")
        return SqrtPiCoefficient(self.q + other.q, self.p)

    __radd__ = __add__

    def __neg__(self):
        return SqrtPiCoefficient(-self.q, self.p)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SqrtPiCoefficient(self.q * other, self.p)
        if isinstance(other, SqrtPiCoefficient):
            return SqrtPiCoefficient(self.q * other.q, self.p + other.p)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return SqrtPiCoefficient(self.q / other, self.p)
        if isinstance(other, SqrtPiCoefficient):
            if other.is_zero():
                raise ZeroDivisionError("division by the zero scalar")
            return SqrtPiCoefficient(self.q / other.q, self.p - other.p)
        return NotImplemented

    def __float__(self):
        return float(self.q) * math.pi ** (self.p / 2)

    def __str__(self):
        return f"{self.q.numerator}/{self.q.denominator} * pi^({self.p}/2)"

    def to_json(self) -> dict:
        return {"q": f"{self.q.numerator}/{self.q.denominator}",
                "pi_half_power": self.p,
                "float": float(self)}


SQRT_PI = SqrtPiCoefficient(1, 1)
INV_SQRT_PI = SqrtPiCoefficient(1, -1)


def gamma_half_integer(n: int) -> SqrtPiCoefficient:
    """Exact Gamma(n + 1/2) for any integer n."""
    if n >= 0:
        # Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
        q = Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n))
    else:
        m = -n
        # Gamma(1/2 - m) = (-4)^m m! / (2m)! sqrt(pi)
        q = Fraction((-4) ** m * math.factorial(m), math.factorial(2 * m))
    return SqrtPiCoefficient(q, 1)


def gamma_integer(n: int) -> SqrtPiCoefficient:
    """Exact Gamma(n) for a positive integer n."""
    if n <= 0:
        raise ValueError(f"Gamma has a pole at {n}")
    return SqrtPiCoefficient(math.factorial(n - 1), 0)


def gamma_bracket(k: int, j: int) -> Fraction:
    """Gamma(k+j+1/2) / ((k+j)! Gamma(k+1/2)) as an exact rational.

    The Gamma ratio telescopes into a product of half-integers; negative
    ``j`` uses the reciprocal product.
    """
    if k + j < 0:
        raise ValueError(f"bracket {{{k},{j}}} hits a pole of 1/(k+j)!")
    ratio = Fraction(1)
    if j >= 0:
        for i in range(j):
            ratio *= Fraction(2 * (k + i) + 1, 2)
    else:
        for i in range(j, 0):
            ratio /= Fraction(2 * (k + i) + 1, 2)
    return ratio / math.factorial(k + j)

"""Geometries in which words over {N, Delta} become concrete functions.

Each context fixes a representation of functions near the boundary, the
distance function ``delta`` to the boundary, and exact actions of

    Delta          (the sub-Laplacian)
    N phi = 2 g(grad phi, grad delta) + phi * Delta(delta)

together with a rule restricting a function to the boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping

from ..opalg import ReducedPoly, SqrtPiCoefficient, reduced_d
from .series import (HomogeneousSeries, LaurentRadial, TruncationError,
                     hseries_grad_pair, hseries_laplacian)
from .taylor import f_taylor

DEFAULT_TRUNC = 12


class EvalContext:
    """Common interface; subclasses provide the geometry-specific actions."""

    name = "abstract"

    def one(self):
        raise NotImplementedError

    def delta(self):
        raise NotImplementedError

    def laplacian(self, u):
        raise NotImplementedError

    def n_apply(self, u):
        raise NotImplementedError

    def restrict(self, u) -> Dict[int, Fraction]:
        """Boundary values as {power of r: rational coefficient}."""
        raise NotImplementedError

    def delta_laplacian(self):
        return self.laplacian(self.delta())

    def apply_word(self, word: str, u):
        # rightmost letter acts first
        for letter in reversed(word):
            u = self.n_apply(u) if letter == "N" else self.laplacian(u)
        return u

    def describe(self) -> dict:
        return {"geometry": self.name}


class IntervalContext(EvalContext):
    """The interval (0, L); near each endpoint delta is the arclength s.

    Functions are polynomials in s, so Delta = d^2/ds^2, N = 2 d/ds and
    Delta(delta) = 0. Both endpoints give the same value by symmetry.
    """

    name = "interval"

    def __init__(self, length=1):
        self.length = Fraction(length)
        if self.length <= 0:
            raise ValueError("interval length must be positive")

    def one(self):
        return LaurentRadial.constant(1)

    def delta(self):
        return LaurentRadial({1: Fraction(1)})

    def laplacian(self, u: LaurentRadial) -> LaurentRadial:
        return u.derivative().derivative()

    def n_apply(self, u: LaurentRadial) -> LaurentRadial:
        return u.derivative() * 2

    def restrict(self, u: LaurentRadial) -> Dict[int, Fraction]:
        if any(m < 0 for m in u.coeffs):
            raise ValueError("interval functions must be polynomial in s")
        return {0: u.coeffs.get(0, Fraction(0))}

    def describe(self):
        return {"geometry": self.name, "L": str(self.length)}


class DiskContext(EvalContext):
    """The Euclidean disk of radius R; delta = R - r, Delta(delta) = -1/r."""

    name = "disk"

    def __init__(self, radius=1):
        self.radius = Fraction(radius)
        if self.radius <= 0:
            raise ValueError("disk radius must be positive")

    def one(self):
        return LaurentRadial.constant(1)

    def delta(self):
        return LaurentRadial({0: self.radius, 1: Fraction(-1)})

    def laplacian(self, u: LaurentRadial) -> LaurentRadial:
        # f'' + f'/r
        return LaurentRadial({m - 2: c * m * m for m, c in u.coeffs.items() if m})

    def n_apply(self, u: LaurentRadial) -> LaurentRadial:
        # 2 f' (-1) + f (-1/r)
        return LaurentRadial({m - 1: -c * (2 * m + 1) for m, c in u.coeffs.items()})

    def restrict(self, u: LaurentRadial) -> Dict[int, Fraction]:
        return {0: u.evaluate(self.radius)}

    def describe(self):
        return {"geometry": self.name, "R": str(self.radius)}


class HeisenbergPlaneContext(EvalContext):
    """The xy-plane in the first Heisenberg group, approached from z > 0.

    Functions are :class:`HomogeneousSeries`; the distance is
    ``delta = sum_k F_k z^k r^(1-2k)`` truncated at ``z**trunc``.
    """

    name = "heisenberg-plane"

    def __init__(self, trunc: int = DEFAULT_TRUNC):
        if trunc < 1:
            raise ValueError("truncation must be at least 1")
        self.trunc = trunc
        self._delta = delta_series(trunc)
        self._h = hseries_laplacian(self._delta)

    def one(self):
        return HomogeneousSeries.constant(1, self.trunc)

    def delta(self):
        return self._delta

    def laplacian(self, u: HomogeneousSeries) -> HomogeneousSeries:
        return hseries_laplacian(u)

    def delta_laplacian(self):
        return self._h

    def n_apply(self, u: HomogeneousSeries) -> HomogeneousSeries:
        return hseries_grad_pair(u, self._delta) * 2 + u * self._h

    def restrict(self, u: HomogeneousSeries) -> Dict[int, Fraction]:
        return {u.weight: u.boundary_value()}

    def describe(self):
        return {"geometry": self.name, "trunc": self.trunc}


def delta_series(trunc: int) -> HomogeneousSeries:
    """delta = r F(z / r^2) for z > 0, exact through z**trunc."""
    if trunc < 1:
        raise ValueError("truncation must be at least 1")
    coeffs = f_taylor(trunc)
    return HomogeneousSeries(1, dict(enumerate(coeffs)), trunc)


def n_apply(ctx: EvalContext, u):
    return ctx.n_apply(u)


@dataclass(frozen=True)
class BoundaryIntegrand:
    """Boundary restriction of an operator applied to 1.

    ``terms`` maps a power of r to its coefficient; disk and interval
    integrands are constants and use power 0. For the Heisenberg plane a
    term ``{-4: c}`` means ``c * r**-4`` on the punctured plane.
    """

    geometry: str
    terms: Mapping[int, SqrtPiCoefficient] = field(default_factory=dict)

    def __post_init__(self):
        clean = {m: c for m, c in sorted(self.terms.items()) if not c.is_zero()}
        object.__setattr__(self, "terms", clean)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) <= 1

    def value(self) -> SqrtPiCoefficient:
        """The single coefficient (zero if the integrand vanishes)."""
        if not self.is_monomial():
            raise ValueError("integrand is not a single monomial")
        return next(iter(self.terms.values()), SqrtPiCoefficient.zero())

    def power(self):
        return next(iter(self.terms), None)

    def __neg__(self):
        return BoundaryIntegrand(self.geometry, {m: -c for m, c in self.terms.items()})

    def to_json(self) -> dict:
        return {"geometry": self.geometry,
                "terms": [{"r_power": m, **c.to_json()} for m, c in self.terms.items()]}

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c}) r^{m}" if m else f"({c})" for m, c in self.terms.items())


def _eval_once(ctx: EvalContext, rp: ReducedPoly) -> BoundaryIntegrand:
    totals: Dict[int, SqrtPiCoefficient] = {}

    def accumulate(values: Dict[int, Fraction], weight: SqrtPiCoefficient):
        for m, v in values.items():
            term = weight * v
            totals[m] = totals[m] + term if m in totals else term

    if not rp.constant_part.is_zero():
        accumulate(ctx.restrict(ctx.one()), rp.constant_part)
    h = ctx.delta_laplacian()
    cache: Dict[str, object] = {"": h}
    for word, weight in rp.h_terms.items():
        # reuse the longest already-computed suffix
        u, done = h, ""
        for cut in range(len(word) + 1):
            if word[cut:] in cache:
                u, done = cache[word[cut:]], word[cut:]
                break
        for letter in reversed(word[: len(word) - len(done)]):
            u = ctx.n_apply(u) if letter == "N" else ctx.laplacian(u)
            done = letter + done
            cache[done] = u
        accumulate(ctx.restrict(u), weight)
    return BoundaryIntegrand(ctx.name, totals)


def eval_reduced(ctx: EvalContext, rp: ReducedPoly, retry: bool = True) -> BoundaryIntegrand:
    """Restrict ``rp`` (an operator applied to 1) to the boundary.

    For the Heisenberg plane a truncation shortfall is retried once at twice
    the truncation before the error is propagated.
    """
    try:
        return _eval_once(ctx, rp)
    except TruncationError:
        if not (retry and isinstance(ctx, HeisenbergPlaneContext)):
            raise
        return _eval_once(HeisenbergPlaneContext(2 * ctx.trunc), rp)


def integrand(ctx: EvalContext, k: int) -> BoundaryIntegrand:
    """D_k(1) restricted to the boundary of ``ctx``."""
    return eval_reduced(ctx, reduced_d(k))


def coefficient(ctx: EvalContext, k: int) -> SqrtPiCoefficient:
    """Exact heat-content coefficient a_k = -(boundary integral of D_k(1))."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(ctx, IntervalContext):
        if k == 0:
            return SqrtPiCoefficient(ctx.length)
        # two endpoints, each of unit counting measure
        return -integrand(ctx, k).value() * 2
    if isinstance(ctx, DiskContext):
        if k == 0:
            return SqrtPiCoefficient(ctx.radius ** 2, 2)
        perimeter = SqrtPiCoefficient(2 * ctx.radius, 2)
        return -integrand(ctx, k).value() * perimeter
    raise ValueError(f"global coefficients are undefined for {ctx.name}; "
                     "use integrand() for the local boundary integrand")

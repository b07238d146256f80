"""Exact Taylor coefficients of the Heisenberg distance profile.

Near the plane, ``delta = r * F(|z| / r**2)`` with

    F(xi) = (4 xi + y0(xi)) / sqrt(1 + y0(xi)**2),
    4 xi + y0 + (1 + y0**2) arctan(y0) = 0,     y0(0) = 0.

Coefficients are computed by truncated power-series arithmetic over
:class:`fractions.Fraction`; nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence

Series = List[Fraction]


def _trunc(a: Sequence[Fraction], n: int) -> Series:
    out = list(a[: n + 1])
    return out + [Fraction(0)] * (n + 1 - len(out))


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> Series:
    out = [Fraction(0)] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: n + 1 - i]):
            out[i + j] += ai * bj
    return out


def series_compose(outer: Sequence[Fraction], inner: Sequence[Fraction], n: int) -> Series:
    """outer(inner(x)) truncated at x**n; requires inner[0] == 0."""
    if inner and inner[0] != 0:
        raise ValueError("inner series must vanish at the origin")
    out = [Fraction(0)] * (n + 1)
    power = _trunc([Fraction(1)], n)
    for k, ck in enumerate(outer[: n + 1]):
        if k > 0:
            power = series_mul(power, inner, n)
        if ck:
            for i in range(n + 1):
                out[i] += ck * power[i]
    return out


def arctan_series(n: int) -> Series:
    out = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1, 2):
        out[k] = Fraction((-1) ** ((k - 1) // 2), k)
    return out


def inv_sqrt_one_plus_series(n: int) -> Series:
    """Coefficients of (1 + u)**(-1/2)."""
    out = [Fraction(1)]
    c = Fraction(1)
    for k in range(1, n + 1):
        c *= Fraction(-1, 2) - (k - 1)
        c /= k
        out.append(c)
    return out


@lru_cache(maxsize=None)
def _y0(n: int) -> tuple:
    # g(y) = y + (1 + y^2) arctan(y) = 2y + h(y), h starting at y^3;
    # iterate y <- -2 xi - h(y)/2, each pass fixes at least one more order
    at = arctan_series(n)
    h = [Fraction(0)] * (n + 1)
    for i, c in enumerate(at):
        h[i] += c
        if i + 2 <= n:
            h[i + 2] += c
    if n >= 1:
        h[1] += 1 - 2  # bare y term, minus the linear part 2y
    y = [Fraction(0)] * (n + 1)
    if n >= 1:
        y[1] = Fraction(-2)
    for _ in range(n):
        hy = series_compose(h, y, n)
        new = [-c / 2 for c in hy]
        if n >= 1:
            new[1] += -2
        if new == y:
            break
        y = new
    return tuple(y)


def y0_taylor(n: int) -> Series:
    """Taylor coefficients [c_0, ..., c_n] of y0 at 0."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return list(_y0(n))


@lru_cache(maxsize=None)
def _f(n: int) -> tuple:
    y = list(_y0(n))
    num = list(y)
    if n >= 1:
        num[1] += 4
    y2 = series_mul(y, y, n)
    inv = series_compose(inv_sqrt_one_plus_series(n), y2, n)
    return tuple(series_mul(num, inv, n))


def f_taylor(n: int) -> Series:
    """Taylor coefficients [F_0, ..., F_n] of the distance profile F."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return list(_f(n))

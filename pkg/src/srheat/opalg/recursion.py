"""Operator families R, S, P, Q, Z, A and the heat-content operators D_k."""
from __future__ import annotations

import math
import threading
from typing import Callable, Dict, Tuple

from .coeff import (INV_SQRT_PI, SqrtPiCoefficient, gamma_bracket,
                    gamma_half_integer, gamma_integer)
from .poly import DELTA, ID, N, OperatorPoly, apply_to_one, ReducedPoly

# (N^2 - Delta) and Delta N, shared by both two-index families
_N2_MINUS_DELTA = N * N - DELTA
_DELTA_N = DELTA * N


class _Memo:
    """Memo table: lock-free reads, inserts serialized under one lock."""

    def __init__(self, name: str):
        self.name = name
        self._table: Dict[tuple, object] = {}
        self._lock = threading.RLock()

    def get(self, key, compute: Callable[[], object]):
        try:
            return self._table[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._table:
                self._table[key] = compute()
            return self._table[key]

    def __len__(self):
        return len(self._table)


_RS = _Memo("RS")
_PQ = _Memo("PQ")
_Z = _Memo("Z")
_A = _Memo("A")
_D = _Memo("D")


def _outside(k: int, j: int) -> bool:
    return k < 0 or j < 0 or k < j


def _family(memo: _Memo, init: Tuple[OperatorPoly, OperatorPoly]):
    zero = OperatorPoly.zero()

    def entry(k: int, j: int) -> Tuple[OperatorPoly, OperatorPoly]:
        if _outside(k, j):
            return zero, zero
        if k == 0:
            return init

        def compute():
            a_prev, b_prev = entry(k - 1, j)
            a_diag, _ = entry(k - 1, j - 1)
            first = -(_N2_MINUS_DELTA * a_prev) + N * b_prev
            second = N * a_diag - _DELTA_N * a_prev + DELTA * b_prev
            return first, second

        return memo.get((k, j), compute)

    return entry


_rs_entry = _family(_RS, (ID, OperatorPoly.zero()))
_pq_entry = _family(_PQ, (OperatorPoly.zero(), ID))


def rs_entry(k: int, j: int) -> Tuple[OperatorPoly, OperatorPoly]:
    """(R_kj, S_kj); zero outside 0 <= j <= k."""
    return _rs_entry(k, j)


def pq_entry(k: int, j: int) -> Tuple[OperatorPoly, OperatorPoly]:
    """(P_kj, Q_kj); zero outside 0 <= j <= k."""
    return _pq_entry(k, j)


def rs_tables(k_max: int) -> Dict[Tuple[int, int], Tuple[OperatorPoly, OperatorPoly]]:
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    return {(k, j): rs_entry(k, j) for k in range(k_max + 1) for j in range(k + 1)}


def pq_tables(k_max: int) -> Dict[Tuple[int, int], Tuple[OperatorPoly, OperatorPoly]]:
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    return {(k, j): pq_entry(k, j) for k in range(k_max + 1) for j in range(k + 1)}


def z_operator(k: int) -> OperatorPoly:
    """Z_k = sum_{j=0}^{k-1} {k, j-1} R_{k+j-1, j}; Z_0 = 0."""
    if k < 0:
        raise ValueError("k must be non-negative")

    def compute():
        out = OperatorPoly.zero()
        for j in range(k):
            r, _ = rs_entry(k + j - 1, j)
            out = out + r * gamma_bracket(k, j - 1)
        return out

    return _Z.get(k, compute)


def a_operator(k: int) -> OperatorPoly:
    """A_k = sum_{j=0}^{k+1} {k, j} S_{k+j, j}."""
    if k < 0:
        raise ValueError("k must be non-negative")

    def compute():
        out = OperatorPoly.zero()
        for j in range(k + 2):
            _, s = rs_entry(k + j, j)
            out = out + s * gamma_bracket(k, j)
        return out

    return _A.get(k, compute)


def _even_weight(n: int, i: int) -> SqrtPiCoefficient:
    # Gamma(i+1/2) Gamma(n-i+1/2) / n!
    return gamma_half_integer(i) * gamma_half_integer(n - i) / math.factorial(n)


def _odd_weight(n: int, i: int) -> SqrtPiCoefficient:
    # Gamma(i+1) Gamma(n-i+1/2) / Gamma(n+3/2)
    return gamma_integer(i + 1) * gamma_half_integer(n - i) / gamma_half_integer(n + 1)


def d_operator(k: int) -> OperatorPoly:
    """The operator D_k, homogeneous of degree k-1 in (N, Delta)."""
    if k < 1:
        raise ValueError("D_k is defined for k >= 1")

    def compute():
        if k == 1:
            return ID * SqrtPiCoefficient(2, -1)
        n, odd = divmod(k, 2)
        out = OperatorPoly.zero()
        if odd:
            out = out + z_operator(n + 1) * INV_SQRT_PI
            for i in range(1, n + 1):
                w = _odd_weight(n, i) * INV_SQRT_PI
                out = out + (d_operator(2 * i) * a_operator(n - i)) * w
        else:
            for i in range(1, n + 1):
                w = _even_weight(n, i) * INV_SQRT_PI
                out = out + (d_operator(2 * i - 1) * a_operator(n - i)) * w
        return out

    return _D.get(k, compute)


def d_one_via_z() -> OperatorPoly:
    """D_1 from the odd-order formula at n = 0, i.e. Z_1 / sqrt(pi)."""
    return z_operator(1) * INV_SQRT_PI


def reduced_d(k: int) -> ReducedPoly:
    """D_k(1) expressed through H = Delta(delta)."""
    return apply_to_one(d_operator(k))


def memo_sizes() -> Dict[str, int]:
    return {m.name: len(m) for m in (_RS, _PQ, _Z, _A, _D)}

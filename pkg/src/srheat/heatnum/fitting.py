"""Fitting Q(t) ~ sum_k a_k t^(k/2) to sampled heat content."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .heatcontent import HeatContentSamples

CONDITION_LIMIT = 1e12


class IllConditionedFitWarning(RuntimeWarning):
    pass


@dataclass
class AsymptoticFit:
    coefficients: List[float]
    residual: float
    condition: float
    method: str
    t_max: float
    geometry: str = ""
    residuals: List[float] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.coefficients) - 1

    def predict(self, t) -> np.ndarray:
        s = np.sqrt(np.asarray(t, dtype=float))
        return np.polynomial.polynomial.polyval(s, self.coefficients)

    def to_json(self) -> dict:
        return {"geometry": self.geometry, "m": self.m,
                "coefficients": [float(c) for c in self.coefficients],
                "residual": float(self.residual), "condition": float(self.condition),
                "method": self.method}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _scaled_basis(s: np.ndarray, s_max: float, first: int, last: int) -> np.ndarray:
    return np.vander(s / s_max, last + 1, increasing=True)[:, first:]


def _lstsq(V: np.ndarray, y: np.ndarray):
    # column equilibration before the solve keeps the reported condition honest
    norms = np.linalg.norm(V, axis=0)
    norms[norms == 0] = 1.0
    coef, *_ = np.linalg.lstsq(V / norms, y, rcond=None)
    return coef / norms, np.linalg.cond(V / norms)


def _peel(s: np.ndarray, q: np.ndarray, m: int, s_max: float, a0: Optional[float]):
    """Sequential peel-off: each stage fixes the lowest remaining coefficient.

    Stage k fits the remainder q - sum_{j<k} a_j s^j on s^k..s^m and keeps
    only the leading coefficient. The remainder is never divided by s, which
    would amplify rounding at the smallest times.
    """
    coeffs: List[float] = []
    rest = q.copy()
    cond = 1.0
    for k in range(m + 1):
        if k == 0 and a0 is not None:
            c = a0
        else:
            coef, ck = _lstsq(_scaled_basis(s, s_max, k, m), rest)
            cond = max(cond, ck)
            c = coef[0] / s_max ** k
        coeffs.append(float(c))
        rest = rest - c * s ** k
    return coeffs, cond


def fit_halfpowers(samples: HeatContentSamples, m: int, a0: Optional[float] = None,
                   method: str = "auto") -> AsymptoticFit:
    """Fit a_0..a_m in Q(t) = sum_k a_k t^(k/2).

    ``method`` is ``peel`` (sequential peel-off, one coefficient per stage),
    ``lstsq`` (one scaled least-squares solve in the basis (t / t_max)^(k/2))
    or ``auto``: both, keeping the peel-off only when it reproduces the data
    at least twice as well and least squares is above the rounding floor.
    A known ``a0`` is held fixed.
    """
    t = np.asarray(samples.t, dtype=float)
    q = np.asarray(samples.Q, dtype=float)
    if m < 0:
        raise ValueError("m must be non-negative")
    if len(t) < 2 * (m + 1):
        raise ValueError(f"need at least {2 * (m + 1)} samples for order {m}")
    if t.min() <= 0 or t.max() / t.min() < 100.0:
        raise ValueError("samples must be positive and span at least two decades of t")
    if m == 0 and a0 is not None:
        raise ValueError("nothing to fit")
    order = np.argsort(t, kind="stable")
    t, q = t[order], q[order]
    s = np.sqrt(t)
    s_max = float(s.max())

    def lstsq_fit():
        first = 1 if a0 is not None else 0
        y = q - (a0 if a0 is not None else 0.0)
        coef, cond = _lstsq(_scaled_basis(s, s_max, first, m), y)
        c = ([a0] if a0 is not None else []) + [coef[i] / s_max ** (i + first)
                                                 for i in range(len(coef))]
        return [float(v) for v in c], cond

    if method not in ("auto", "peel", "lstsq"):
        raise ValueError(f"unknown method {method!r}")
    if method == "lstsq":
        coeffs, cond, used = *lstsq_fit(), "lstsq"
    else:
        coeffs, cond = _peel(s, q, m, s_max, a0)
        used = "peel"
        if method == "auto":
            ls_coeffs, ls_cond = lstsq_fit()
            peel_res = _max_residual(s, q, coeffs)
            ls_res = _max_residual(s, q, ls_coeffs)
            # residuals at the rounding floor carry no information; the joint
            # solve is then the more accurate one
            floor = 64 * np.finfo(float).eps * np.abs(q).max()
            if ls_res <= floor or peel_res > 0.5 * ls_res:
                coeffs, cond, used = ls_coeffs, ls_cond, "lstsq"
    if cond > CONDITION_LIMIT:
        warnings.warn(f"half-power fit is ill-conditioned (condition {cond:.2e})",
                      IllConditionedFitWarning, stacklevel=2)
    res = q - np.polynomial.polynomial.polyval(s, coeffs)
    return AsymptoticFit(coeffs, float(np.abs(res).max()), float(cond), used, float(t.max()),
                         samples.geometry, [float(r) for r in res])


def _max_residual(s, q, coeffs) -> float:
    return float(np.abs(q - np.polynomial.polynomial.polyval(s, coeffs)).max())


class HalfPowerRegressor(RegressorMixin, BaseEstimator):
    """Estimator wrapper around :func:`fit_halfpowers`; X holds the times."""

    def __init__(self, m: int = 4, a0: Optional[float] = None, method: str = "auto"):
        self.m = m
        self.a0 = a0
        self.method = method

    def fit(self, X, y):
        t = np.asarray(X, dtype=float).reshape(len(y), -1)[:, 0]
        fit = fit_halfpowers(HeatContentSamples(np.sort(t), np.asarray(y, float)[np.argsort(t)], ""),
                             self.m, self.a0, self.method)
        self.fit_ = fit
        self.coef_ = np.asarray(fit.coefficients)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        t = np.asarray(X, dtype=float).reshape(-1)
        return self.fit_.predict(t)

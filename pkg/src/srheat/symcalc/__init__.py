"""Exact evaluation of reduced operators in the interval, disk and Heisenberg plane."""
from .contexts import (DEFAULT_TRUNC, BoundaryIntegrand, DiskContext, EvalContext,
                       HeisenbergPlaneContext, IntervalContext, coefficient,
                       delta_series, eval_reduced, integrand, n_apply)
from .series import (HomogeneousSeries, LaurentRadial, TruncationError,
                     hseries_grad_pair, hseries_laplacian)
from .taylor import f_taylor, y0_taylor

__all__ = [
    "HomogeneousSeries", "LaurentRadial", "TruncationError",
    "hseries_laplacian", "hseries_grad_pair", "y0_taylor", "f_taylor",
    "EvalContext", "IntervalContext", "DiskContext", "HeisenbergPlaneContext",
    "BoundaryIntegrand", "DEFAULT_TRUNC", "delta_series", "n_apply",
    "eval_reduced", "integrand", "coefficient",
]

"""Numerical heat-content oracles, Duhamel formulas and half-power fits."""
from .duhamel import (HalfLineProblem, IteratedDuhamel, duhamel_eval,
                      iterated_duhamel_eval, kernel_apply, neumann_kernel)
from .fitting import (AsymptoticFit, HalfPowerRegressor, IllConditionedFitWarning,
                      fit_halfpowers)
from .heatcontent import (HeatContentSamples, RadialMesh, default_times,
                          disk_heat_content, interval_heat_content, interval_samples)
from .meanvalue import RadialTestFunction, mean_value_residual, polynomial_test_function
from .quadrature import QuadratureError, integrate

__all__ = [
    "neumann_kernel", "kernel_apply", "HalfLineProblem", "duhamel_eval",
    "iterated_duhamel_eval", "IteratedDuhamel", "interval_heat_content",
    "interval_samples", "disk_heat_content", "default_times", "RadialMesh",
    "HeatContentSamples", "fit_halfpowers", "AsymptoticFit", "HalfPowerRegressor",
    "IllConditionedFitWarning", "mean_value_residual", "RadialTestFunction",
    "polynomial_test_function", "QuadratureError", "integrate",
]

"""Exact {N, Delta} operator algebra and the D_k recursion."""
from .coeff import (INV_SQRT_PI, SQRT_PI, MixedPiPowerError, SqrtPiCoefficient,
                    gamma_bracket, gamma_half_integer, gamma_integer)
from .poly import (DELTA, ID, N, Generator, OperatorPoly, ReducedPoly, add,
                   apply_to_one, compose, format_word, scale, serialize,
                   word_degree)
from .recursion import (a_operator, d_one_via_z, d_operator, pq_entry,
                        pq_tables, reduced_d, rs_entry, rs_tables, z_operator)

__all__ = [
    "SqrtPiCoefficient", "MixedPiPowerError", "SQRT_PI", "INV_SQRT_PI",
    "gamma_bracket", "gamma_half_integer", "gamma_integer",
    "Generator", "OperatorPoly", "ReducedPoly", "N", "DELTA", "ID",
    "compose", "add", "scale", "serialize", "apply_to_one", "format_word",
    "word_degree", "rs_tables", "pq_tables", "rs_entry", "pq_entry",
    "z_operator", "a_operator", "d_operator", "d_one_via_z", "reduced_d",
]

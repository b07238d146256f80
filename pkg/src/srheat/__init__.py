"""Exact and numerical tools for small-time heat-content asymptotics.

Subpackages
-----------
opalg       noncommutative {N, Delta} word algebra and the D_k recursion
symcalc     evaluation of reduced operators in concrete geometries
heisenberg  distance from the xy-plane in the first Heisenberg group
heatnum     numerical heat-content oracles, Duhamel formulas and fits
"""

__version__ = "0.1.0"

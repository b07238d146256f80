"""Distance from the plane z = 0 in the first Heisenberg group."""
from .blowup import annulus_integral, blowup_integral, converges_at_origin
from .distance import (AXIS_RTOL, RESIDUAL_TOL, DistanceResult, GeodesicFoot,
                       NoBranchError, SolverError, branch_one_exists, distance,
                       distance_to_plane, foot_endpoint, k_fun, t_fun, y0_solve)
from .geodesics import (Point, exp_jacobian_det, focal_time, geodesic_point,
                        geodesic_velocity)
from .sampling import (CSV_COLUMNS, Axis, GridSpec, PlaneDistanceTransformer,
                       rows_to_csv, sample_grid)

__all__ = [
    "Point", "GeodesicFoot", "DistanceResult", "NoBranchError", "SolverError",
    "geodesic_point", "geodesic_velocity", "focal_time", "exp_jacobian_det",
    "k_fun", "t_fun", "y0_solve", "branch_one_exists", "distance_to_plane",
    "distance", "foot_endpoint", "AXIS_RTOL", "RESIDUAL_TOL",
    "blowup_integral", "annulus_integral", "converges_at_origin",
    "Axis", "GridSpec", "sample_grid", "rows_to_csv", "CSV_COLUMNS",
    "PlaneDistanceTransformer",
]

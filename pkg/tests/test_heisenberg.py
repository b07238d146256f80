import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq
from sklearn.base import clone

from srheat.heisenberg import (Axis, CSV_COLUMNS, GeodesicFoot, GridSpec, NoBranchError,
                               PlaneDistanceTransformer, Point, annulus_integral,
                               blowup_integral, branch_one_exists, converges_at_origin,
                               distance, distance_to_plane, exp_jacobian_det, focal_time,
                               foot_endpoint, geodesic_point, geodesic_velocity, k_fun,
                               rows_to_csv, sample_grid, t_fun, y0_solve)
from srheat.opalg import SqrtPiCoefficient
from srheat.symcalc import BoundaryIntegrand, HeisenbergPlaneContext, integrand


def reference_distance(r, z):
    """Arrival time of the plane geodesics reaching radius r at height z > 0.

    A geodesic leaving radius r0 has radius r0 cos(a) and height
    (r0^2 / 8)(2a + sin 2a) at time t = a r0; eliminate r0 and solve for a.
    """
    height = lambda a: r * r * (2 * a + math.sin(2 * a)) / (8 * math.cos(a) ** 2) - z
    a = brentq(height, 1e-12, math.pi / 2 - 1e-12, xtol=1e-15, rtol=1e-15)
    return a * r / math.cos(a)


def horizontal_speed(x0, y0, t):
    dx, dy, _ = geodesic_velocity(x0, y0, t)
    return math.hypot(dx, dy)


class TestGeodesics:
    def test_start(self):
        p = geodesic_point(0.6, -0.8, 0.0)
        assert p.as_tuple() == pytest.approx((0.6, -0.8, 0.0), abs=1e-15)

    def test_focal_point(self):
        r0 = 1.7
        p = geodesic_point(r0 * math.cos(0.4), r0 * math.sin(0.4), focal_time(r0))
        assert p.as_tuple() == pytest.approx((0.0, 0.0, math.pi * r0 ** 2 / 8), abs=1e-14)
        # the focal point is on the axis, where the distance is sqrt(2 pi z)
        assert math.sqrt(2 * math.pi * p.z) == pytest.approx(focal_time(r0), rel=1e-14)

    def test_unit_speed_arclength(self):
        x0, y0, t = 0.3, 1.1, 1.2
        length, _ = quad(lambda s: horizontal_speed(x0, y0, s), 0, t, epsabs=1e-13)
        assert length == pytest.approx(t, abs=1e-8)

    @pytest.mark.parametrize("t", [0.0, 0.3, 0.9, 1.5])
    def test_horizontal(self, t):
        x0, y0 = -0.4, 0.9
        p = geodesic_point(x0, y0, t)
        dx, dy, dz = geodesic_velocity(x0, y0, t)
        assert dz == pytest.approx((p.x * dy - p.y * dx) / 2, abs=1e-14)

    def test_velocity_is_derivative(self):
        x0, y0, t, h = 0.5, 0.2, 0.7, 1e-5
        a, b = geodesic_point(x0, y0, t - h), geodesic_point(x0, y0, t + h)
        num = [(q - p) / (2 * h) for p, q in zip(a.as_tuple(), b.as_tuple())]
        assert num == pytest.approx(list(geodesic_velocity(x0, y0, t)), abs=1e-9)

    def test_origin_rejected(self):
        with pytest.raises(ValueError):
            geodesic_point(0.0, 0.0, 1.0)

    def test_jacobian(self):
        r0 = 2.0
        assert exp_jacobian_det(r0, 0.0) == pytest.approx(r0 / 2)
        assert exp_jacobian_det(r0, focal_time(r0)) == pytest.approx(0.0, abs=1e-14)
        assert exp_jacobian_det(r0, 0.9 * focal_time(r0)) > 0
        assert exp_jacobian_det(r0, 1.1 * focal_time(r0)) < 0


class TestBranchEquation:
    def test_k_at_bracket_end(self):
        xi = 0.3
        assert k_fun(xi, -4 * xi) == pytest.approx(-math.atan(4 * xi) / math.pi, rel=1e-14)

    def test_k_limit(self):
        assert k_fun(0.2, 1e8) == pytest.approx(0.5, abs=1e-7)

    @pytest.mark.parametrize("xi", [1e-8, 1e-4, 1e-2])
    def test_small_xi(self, xi):
        y = y0_solve(xi)
        assert y == pytest.approx(-2 * xi, rel=10 * xi)
        assert t_fun(xi, y) == pytest.approx(2 * xi, rel=10 * xi)

    @given(st.floats(1e-6, 1e3))
    @settings(max_examples=60)
    def test_root_in_bracket(self, xi):
        y = y0_solve(xi)
        assert -4 * xi < y < 0
        assert abs(k_fun(xi, y)) < 1e-12

    def test_branch_one(self):
        assert not branch_one_exists(math.pi / 8)
        with pytest.raises(NoBranchError):
            y0_solve(math.pi / 8, 1)
        xi = 2.0
        assert branch_one_exists(xi)
        y1 = y0_solve(xi, 1)
        assert k_fun(xi, y1) == pytest.approx(1.0, abs=1e-13)
        assert t_fun(xi, y1) > t_fun(xi, y0_solve(xi))

    def test_bad_input(self):
        with pytest.raises(ValueError):
            y0_solve(0.0)
        with pytest.raises(ValueError):
            y0_solve(1.0, 2)


class TestDistance:
    def test_plane_and_axis(self):
        assert distance(0.3, -2.0, 0.0) == 0.0
        assert distance(0.0, 0.0, 1.0) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)
        assert distance(0.0, 0.0, -2.0) == pytest.approx(math.sqrt(4 * math.pi), rel=1e-15)
        assert distance_to_plane(Point(0, 0, 1)).on_axis

    @given(st.floats(0.05, 5), st.floats(1e-4, 20))
    @settings(max_examples=60)
    def test_against_geodesic_family(self, r, z):
        assert distance(r, 0.0, z) == pytest.approx(reference_distance(r, z), rel=1e-10)

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-5, 5), st.floats(0.1, 10))
    @settings(max_examples=60)
    def test_dilation(self, x, y, z, lam):
        if math.hypot(x, y) < 1e-3:
            return
        p = Point(x, y, z)
        assert distance_to_plane(p.dilate(lam)).value == pytest.approx(
            lam * distance_to_plane(p).value, rel=1e-11, abs=1e-300)

    @given(st.floats(0.1, 3), st.floats(-math.pi, math.pi), st.floats(-4, 4))
    @settings(max_examples=60)
    def test_rotation_and_reflection(self, r, phi, z):
        d = distance(r, 0.0, z)
        p = Point.from_cylindrical(r, phi, z)
        assert distance(p.x, p.y, p.z) == pytest.approx(d, rel=1e-12, abs=1e-300)
        assert distance(p.x, -p.y, -p.z) == pytest.approx(d, rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("x0,y0,frac", [(1.0, 0.0, 0.5), (0.3, -0.7, 0.9), (-2.0, 1.0, 0.2)])
    def test_geodesic_endpoint(self, x0, y0, frac):
        t = frac * focal_time(math.hypot(x0, y0))
        p = geodesic_point(x0, y0, t)
        res = distance_to_plane(p)
        assert res.value == pytest.approx(t, rel=1e-11)
        assert (res.foot.x0, res.foot.y0) == pytest.approx((x0, y0), abs=1e-9)

    @pytest.mark.parametrize("p", [(1.0, 0.5, 0.7), (0.2, -0.1, -3.0), (2.0, 2.0, 40.0)])
    def test_foot_round_trip(self, p):
        res = distance_to_plane(Point(*p))
        q = foot_endpoint(res.foot, p[2])
        assert q.as_tuple() == pytest.approx(p, abs=1e-10)

    def test_branch_zero_minimises(self):
        for xi in np.geomspace(0.7, 100, 25):
            if branch_one_exists(xi):
                assert t_fun(xi, y0_solve(xi, 1)) > t_fun(xi, y0_solve(xi, 0))

    def test_axis_gap_is_linear_in_r(self):
        # near the axis the distance drops below sqrt(2 pi z) by about r
        for r in (1e-3, 1e-4, 1e-5):
            gap = math.sqrt(2 * math.pi) - distance(r, 0.0, 1.0)
            assert gap / r == pytest.approx(1.0, rel=1e-5)

    def test_foot_validation(self):
        with pytest.raises(ValueError):
            GeodesicFoot(0.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            GeodesicFoot(1.0, 0.0, -1.0)


class TestBlowup:
    def test_annulus(self):
        # 2 pi * int_1^2 r^2 dr = 14 pi / 3
        assert annulus_integral(1.0, 0, 1.0, 2.0) == pytest.approx(14 * math.pi / 3)
        assert annulus_integral(-2.0, -3, 1.0, math.e) == pytest.approx(4 * math.pi)

    def test_a5_diverges_like_one_over_r(self):
        a5 = -integrand(HeisenbergPlaneContext(), 5)
        c = 4 / 15 / math.sqrt(math.pi)
        for eps in (1e-1, 1e-2, 1e-3):
            assert blowup_integral(eps, 1.0, a5) == pytest.approx(
                2 * math.pi * c * (1 / eps - 1), rel=1e-12)
        assert not converges_at_origin(a5.power())
        assert converges_at_origin(-2)

    def test_zero_integrand(self):
        assert blowup_integral(0.1, 1.0, BoundaryIntegrand("heisenberg-plane")) == 0.0
        with pytest.raises(ValueError):
            blowup_integral(0.0, 1.0, BoundaryIntegrand("heisenberg-plane"))

    def test_rejects_sums(self):
        two = BoundaryIntegrand("heisenberg-plane", {-2: SqrtPiCoefficient(1), -4: SqrtPiCoefficient(1)})
        with pytest.raises(ValueError):
            blowup_integral(0.1, 1.0, two)


class TestSampling:
    def test_axis_parse(self):
        assert Axis.parse("0:1:3").values().tolist() == [0.0, 0.5, 1.0]
        for bad in ("0:1", "a:b:c", "0:1:0"):
            with pytest.raises(ValueError):
                Axis.parse(bad)

    def test_grid_csv(self):
        spec = GridSpec(Axis(0, 1, 2), Axis(0, 0, 1), Axis(-1, 1, 3))
        rows = sample_grid(spec)
        assert len(rows) == spec.size == 6
        lines = rows_to_csv(rows).splitlines()
        assert lines[0].split(",") == list(CSV_COLUMNS)
        assert len(lines) == 7
        axis_row = lines[1].split(",")
        assert axis_row[4] == "1" and axis_row[5] == ""

    def test_transformer(self):
        X = np.array([[1.0, 0.0, 1.0], [0.0, 0.0, 2.0], [0.5, 0.5, -0.3]])
        tr = PlaneDistanceTransformer(return_foot=True).fit(X)
        out = tr.transform(X)
        assert out.shape == (3, 3)
        assert out[:, 0] == pytest.approx([distance(*row) for row in X])
        assert np.isnan(out[1, 1:]).all()
        assert clone(tr).get_params() == {"tol": 1e-14, "return_foot": True}
        assert PlaneDistanceTransformer().fit_transform(X).shape == (3, 1)
        with pytest.raises(ValueError):
            tr.transform(X[:, :2])

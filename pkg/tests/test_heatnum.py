import json
import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from scipy.special import jn_zeros
from sklearn.base import clone

from srheat.heatnum import (HalfLineProblem, HalfPowerRegressor, HeatContentSamples,
                            IllConditionedFitWarning, QuadratureError, RadialMesh,
                            default_times, disk_heat_content, duhamel_eval, fit_halfpowers,
                            integrate, interval_heat_content, interval_samples,
                            iterated_duhamel_eval, kernel_apply, mean_value_residual,
                            neumann_kernel, polynomial_test_function)
from srheat.heatnum.meanvalue import RadialTestFunction

_t, _r = sp.symbols("t r", real=True)


def manufactured(expr, depth=0, support=40.0):
    """Half-line problem whose exact solution is ``expr(t, r)``."""
    L = lambda u: sp.diff(u, _t) - sp.diff(u, _r, 2)
    lf = [L(expr)]
    for _ in range(depth):
        lf.append(sp.simplify(L(lf[-1])))
    fn = lambda e: sp.lambdify((_t, _r), e, "math")
    flux = [sp.lambdify(_t, sp.diff(e, _r).subs(_r, 0), "math") for e in lf]
    problem = HalfLineProblem(
        f=fn(lf[0]),
        v0=sp.lambdify(_r, expr.subs(_t, 0), "math"),
        v1=sp.lambdify(_t, sp.diff(expr, _r).subs(_r, 0), "math"),
        support=support,
        lf=tuple(fn(e) for e in lf),
        lf_flux=tuple(flux[:depth]),
    )
    return problem, fn(expr)


GAUSS = sp.exp(-_r ** 2 / 8)
SOLUTION = GAUSS * (1 + _t + _t * _r / 2)


class TestKernel:
    def test_symmetric(self):
        assert neumann_kernel(0.3, 0.2, 1.1) == neumann_kernel(0.3, 1.1, 0.2)

    def test_neumann_condition(self):
        h = 1e-6
        d = (neumann_kernel(0.5, h, 0.7) - neumann_kernel(0.5, 0.0, 0.7)) / h
        assert abs(d) < 1e-5

    @pytest.mark.parametrize("t,r", [(1e-4, 0.0), (0.3, 0.5), (2.0, 3.0)])
    def test_mass_one(self, t, r):
        assert kernel_apply(t, r, lambda s: 1.0, 100.0, tol=1e-12) == pytest.approx(1.0, abs=1e-11)

    def test_bad_time(self):
        with pytest.raises(ValueError):
            neumann_kernel(0.0, 0.0, 0.0)


class TestDuhamel:
    def test_constant_initial_data(self):
        p = HalfLineProblem(v0=lambda s: 1.0, support=100.0)
        assert duhamel_eval(p, 0.7, 0.4) == pytest.approx(1.0, abs=1e-9)

    def test_constant_flux(self):
        # d_r v(t, 0) = c with zero data gives v(t, 0) = -2 c sqrt(t / pi)
        c, t = 1.5, 0.4
        p = HalfLineProblem(v1=lambda tau: c)
        assert duhamel_eval(p, t, 0.0, tol=1e-11) == pytest.approx(
            -2 * c * math.sqrt(t / math.pi), rel=1e-9)

    @pytest.mark.parametrize("t,r", [(0.05, 0.0), (0.3, 0.7), (1.0, 2.5)])
    def test_manufactured(self, t, r):
        p, exact = manufactured(SOLUTION)
        assert duhamel_eval(p, t, r, tol=1e-10) == pytest.approx(exact(t, r), abs=1e-8)

    def test_linear(self):
        a = HalfLineProblem(v0=lambda s: math.exp(-s * s), v1=lambda tau: tau)
        b = HalfLineProblem(f=lambda t, s: t * math.exp(-s), v0=lambda s: s * math.exp(-s))
        ab = HalfLineProblem(f=lambda t, s: 2 * b.f(t, s), v0=lambda s: a.v0(s) + 2 * b.v0(s),
                             v1=a.v1)
        t, r = 0.3, 0.2
        lhs = duhamel_eval(ab, t, r, tol=1e-11)
        rhs = duhamel_eval(a, t, r, tol=1e-11) + 2 * duhamel_eval(b, t, r, tol=1e-11)
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_bad_arguments(self):
        p = HalfLineProblem()
        with pytest.raises(ValueError):
            duhamel_eval(p, 0.0, 0.0)
        with pytest.raises(ValueError):
            duhamel_eval(p, 1.0, -1.0)
        with pytest.raises(ValueError):
            HalfLineProblem(support=0.0)


class TestIteratedDuhamel:
    def test_depth_zero(self):
        p, _ = manufactured(SOLUTION)
        t = 0.2
        res = iterated_duhamel_eval(p, 0, t, tol=1e-11)
        assert res.value == pytest.approx(duhamel_eval(p, t, 0.0, tol=1e-11), abs=1e-10)

    @pytest.mark.parametrize("m", [1, 2])
    def test_value_is_exact(self, m):
        p, exact = manufactured(SOLUTION, depth=m)
        t = 0.1
        res = iterated_duhamel_eval(p, m, t, tol=1e-11)
        assert res.value == pytest.approx(exact(t, 0.0), abs=1e-9)
        assert res.expansion + res.remainder == pytest.approx(res.value, abs=1e-14)

    def test_terms_against_mpmath(self):
        p, _ = manufactured(SOLUTION, depth=2)
        t = 0.05
        res = iterated_duhamel_eval(p, 2, t, tol=1e-12)
        mpmath.mp.dps = 30
        e = lambda tt, s: 2 / mpmath.sqrt(4 * mpmath.pi * tt) * mpmath.exp(-s * s / (4 * tt))
        lf1 = p.lf[0]
        want = t * mpmath.quad(lambda s: e(t, s) * lf1(0.0, float(s)), [0, 2, 40])
        assert res.initial_terms[1] == pytest.approx(float(want), rel=1e-9)
        # flux term k: int_0^t e(t - tau, 0, 0) d_r L^(k-1) f(tau, 0) (t - tau)^k / k! dtau
        g = p.lf_flux[0]
        want = mpmath.quad(lambda tau: e(t - tau, 0) * g(float(tau)) * (t - tau), [0, t])
        assert res.flux_terms[1] == pytest.approx(float(want), rel=1e-9)

    def test_remainder_order(self):
        # remainder of depth m is O(t^(m+1))
        p, _ = manufactured(sp.exp(_t) * (1 + _r / 2) * sp.exp(-_r ** 2 / 50), depth=2,
                            support=60.0)
        for m in (1, 2):
            ts = [0.01, 0.005]
            rem = [abs(iterated_duhamel_eval(p, m, t, tol=1e-13).remainder) for t in ts]
            slope = math.log(rem[0] / rem[1]) / math.log(2)
            assert slope == pytest.approx(m + 1, abs=0.1)

    def test_missing_data(self):
        p = HalfLineProblem()
        with pytest.raises(ValueError):
            iterated_duhamel_eval(p, 1, 0.1)
        with pytest.raises(ValueError):
            iterated_duhamel_eval(p, -1, 0.1)


class TestQuadrature:
    def test_integrate(self):
        assert integrate(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-12)

    def test_failure_reported(self):
        with pytest.raises(QuadratureError) as err:
            integrate(lambda x: math.sin(1 / x) / x, 1e-8, 1, tol=1e-14, limit=5)
        assert err.value.achieved > 1e-14


class TestIntervalHeatContent:
    def test_short_time(self):
        for t in (1e-4, 1e-3):
            assert interval_heat_content(1.0, t) == pytest.approx(
                1 - 4 * math.sqrt(t / math.pi), abs=1e-14)

    def test_long_time(self):
        L, t = 2.0, 3.0
        lead = 8 * L / math.pi ** 2 * math.exp(-math.pi ** 2 * t / L ** 2)
        assert interval_heat_content(L, t) == pytest.approx(lead, rel=1e-9)

    def test_samples(self):
        s = interval_samples(3.0)
        assert len(s.t) == 12 and s.t[-1] == pytest.approx(0.09)
        assert s.is_nonincreasing()
        assert s.to_csv().splitlines()[0] == "t,Q"
        json.dumps(s.to_json())

    def test_too_many_modes(self):
        with pytest.raises(ValueError):
            interval_heat_content(1.0, 1e-16)


def bessel_disk(R, t, zeros=jn_zeros(0, 20000)):
    return R * R * np.sum(4 * np.pi / zeros ** 2 * np.exp(-zeros ** 2 * t / (R * R)))


class TestDiskHeatContent:
    def test_total_mass(self):
        mesh = RadialMesh.graded(1.5, 200, 10.0)
        assert mesh.areas.sum() == pytest.approx(math.pi * 1.5 ** 2, rel=1e-14)
        assert np.all(np.diff(mesh.faces) > 0)

    def test_against_bessel_series(self):
        s = disk_heat_content(2.0)
        ref = [bessel_disk(2.0, t) for t in s.t]
        assert np.max(np.abs(s.Q - ref)) < 1e-4
        assert s.is_nonincreasing()
        assert 0.0 <= s.u_min and s.u_max <= 1.0 + 1e-12

    def test_second_order(self):
        t = [1e-2]
        err = [abs(disk_heat_content(1.0, t, grid=(250 * 2 ** i, 12 * 2 ** i)).Q[0]
                   - bessel_disk(1.0, t[0])) for i in range(3)]
        assert err[0] / err[1] == pytest.approx(4.0, rel=0.1)
        assert err[1] / err[2] == pytest.approx(4.0, rel=0.1)

    def test_uniform_mesh(self):
        s = disk_heat_content(1.0, [1e-2], mesh=RadialMesh.uniform(1.0, 1 / 400))
        assert s.Q[0] == pytest.approx(bessel_disk(1.0, 1e-2), rel=1e-4)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            disk_heat_content(0.0)
        with pytest.raises(ValueError):
            disk_heat_content(1.0, [0.0, 1e-3])
        with pytest.raises(ValueError):
            disk_heat_content(1.0, mesh=RadialMesh.uniform(2.0, 0.1))


class TestFitting:
    A = [2.0, -1.5, 0.75, 0.3, -0.2]

    def synthetic(self, n=12):
        t = default_times(1.0, n)
        q = sum(a * t ** (k / 2) for k, a in enumerate(self.A))
        return HeatContentSamples(t, q, "synthetic")

    @pytest.mark.parametrize("method", ["lstsq", "auto"])
    def test_round_trip(self, method):
        fit = fit_halfpowers(self.synthetic(), 4, method=method)
        assert fit.coefficients == pytest.approx(self.A, rel=0, abs=1e-9)

    def test_peel_round_trip(self):
        # the last stage inherits the rounding of every earlier stage
        fit = fit_halfpowers(self.synthetic(), 4, method="peel")
        assert fit.method == "peel"
        assert fit.coefficients == pytest.approx(self.A, rel=1e-7, abs=1e-7)

    def test_fixed_a0(self):
        fit = fit_halfpowers(self.synthetic(), 4, a0=2.0)
        assert fit.coefficients[0] == 2.0
        assert fit.coefficients[1] == pytest.approx(-1.5, rel=1e-9)

    def test_interval(self):
        fit = fit_halfpowers(interval_samples(1.0), 4)
        assert fit.coefficients[1] == pytest.approx(-4 / math.sqrt(math.pi), rel=1e-6)
        assert abs(fit.coefficients[2]) < 1e-5

    def test_disk(self):
        fit = fit_halfpowers(disk_heat_content(1.0), 4)
        assert fit.coefficients[1] == pytest.approx(-4 * math.sqrt(math.pi), rel=1e-4)
        assert fit.coefficients[2] == pytest.approx(math.pi, rel=1e-3)

    def test_permutation_invariant(self):
        s = self.synthetic()
        rng = np.random.default_rng(7)
        idx = rng.permutation(len(s.t))
        reg = HalfPowerRegressor(m=4).fit(s.t[idx].reshape(-1, 1), s.Q[idx])
        ref = HalfPowerRegressor(m=4).fit(s.t.reshape(-1, 1), s.Q)
        assert reg.coef_ == pytest.approx(ref.coef_, rel=1e-12, abs=1e-14)
        assert reg.predict(s.t) == pytest.approx(s.Q, rel=1e-10)
        assert clone(reg).get_params() == {"m": 4, "a0": None, "method": "auto"}

    def test_validation(self):
        s = self.synthetic(6)
        with pytest.raises(ValueError):
            fit_halfpowers(s, 4)
        narrow = HeatContentSamples(np.linspace(1, 2, 12), np.ones(12), "x")
        with pytest.raises(ValueError):
            fit_halfpowers(narrow, 2)
        with pytest.raises(ValueError):
            fit_halfpowers(self.synthetic(), 2, method="spline")
        with pytest.raises(ValueError):
            HeatContentSamples([2.0, 1.0], [0.0, 0.0], "x")

    def test_ill_conditioned_warning(self):
        t = default_times(1.0, 40, 1.0)
        s = HeatContentSamples(t, np.exp(-t), "x")
        with pytest.warns(IllConditionedFitWarning):
            fit_halfpowers(s, 16, method="lstsq")

    def test_json(self):
        fit = fit_halfpowers(self.synthetic(), 4)
        assert json.loads(fit.dumps())["m"] == 4


class TestMeanValue:
    @pytest.mark.parametrize("geometry", ["disk", "interval"])
    def test_constant(self, geometry):
        v = polynomial_test_function(geometry, [1.0])
        assert mean_value_residual(geometry, v, 0.3) < 1e-9

    @pytest.mark.parametrize("r", [0.05, 0.2, 0.4])
    def test_disk_polynomial(self, r):
        v = polynomial_test_function("disk", [1.0, 0.0, -0.5, 0.0, 0.25])
        assert mean_value_residual("disk", v, r, size=1.3) < 1e-8

    def test_interval_polynomial(self):
        v = polynomial_test_function("interval", [0.0, 1.0, 2.0, -1.0])
        assert mean_value_residual("interval", v, 0.2, size=2.0) < 1e-8

    def test_disk_gaussian(self):
        v = RadialTestFunction(lambda p: math.exp(-p * p),
                               lambda p: (4 * p * p - 4) * math.exp(-p * p), "gauss")
        assert mean_value_residual("disk", v, 0.25) < 1e-8

    def test_wrong_laplacian_detected(self):
        v = RadialTestFunction(lambda p: p * p, lambda p: 2.0, "wrong")
        assert mean_value_residual("disk", v, 0.25) > 0.1

    def test_guards(self):
        v = polynomial_test_function("disk", [1.0])
        with pytest.raises(ValueError):
            polynomial_test_function("disk", [0.0, 1.0])
        with pytest.raises(ValueError):
            mean_value_residual("disk", v, 1.2)
        with pytest.raises(ValueError):
            mean_value_residual("disk", v, 0.001)
        with pytest.raises(ValueError):
            mean_value_residual("sphere", v, 0.1)

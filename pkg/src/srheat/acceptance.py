"""End-to-end checks shared by the ``selftest`` command and the test suite.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
tolerance, so a full run always reports every line.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import heatnum, heisenberg, opalg, symcalc
from .opalg import SqrtPiCoefficient


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    details: Dict[str, object] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    elapsed: float = 0.0
    budget: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  [{'; '.join(self.failures)}]" if self.failures else ""
        return f"{self.number:2d} {status} {self.name} ({self.elapsed:.2f}s / {self.budget:g}s){extra}"


class _Recorder:
    def __init__(self):
        self.failures: List[str] = []
        self.details: Dict[str, object] = {}

    def require(self, ok: bool, message: str):
        if not ok:
            self.failures.append(message)


def _run(number: int, name: str, budget: float, body: Callable[[_Recorder], None]) -> CheckResult:
    rec = _Recorder()
    start = time.perf_counter()
    try:
        body(rec)
    except Exception as exc:  # report, do not abort the suite
        rec.failures.append(f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - start
    if elapsed > budget:
        rec.failures.append(f"runtime {elapsed:.1f}s over budget {budget:g}s")
    return CheckResult(number, name, not rec.failures, rec.details, rec.failures, elapsed, budget)


def _pi(q, p=-1) -> SqrtPiCoefficient:
    return SqrtPiCoefficient(Fraction(q), p)


def expected_reduced_table() -> Dict[int, opalg.ReducedPoly]:
    """The reduced operators D_k(1), k = 1..5, written out by hand."""
    zero = SqrtPiCoefficient.zero()
    return {
        1: opalg.ReducedPoly(_pi(2), {}),
        2: opalg.ReducedPoly(zero, {"": SqrtPiCoefficient(Fraction(1, 2))}),
        3: opalg.ReducedPoly(zero, {"N": _pi(Fraction(1, 6))}),
        4: opalg.ReducedPoly(zero, {"D": SqrtPiCoefficient(Fraction(1, 16))}),
        5: opalg.ReducedPoly(zero, {"NNN": _pi(Fraction(-1, 240)),
                                    "ND": _pi(Fraction(8, 240))}),
    }


def check_operator_table() -> CheckResult:
    def body(rec):
        for k, want in expected_reduced_table().items():
            got = opalg.reduced_d(k)
            rec.require(got == want, f"D_{k}(1) = {got}, expected {want}")
        rec.details["D_5(1)"] = str(opalg.reduced_d(5))
    return _run(1, "exact D_k(1) table, k = 1..5", 1.0, body)


def check_recursion_identities() -> CheckResult:
    N, D, ID = opalg.N, opalg.DELTA, opalg.ID

    def body(rec):
        rec.require(opalg.d_one_via_z() == opalg.d_operator(1), "D_1 via Z_1 differs")
        p10, q10 = opalg.pq_entry(1, 0)
        p11, q11 = opalg.pq_entry(1, 1)
        rec.require(p10 == N and q10 == D, "P_10, Q_10 differ from N, Delta")
        rec.require(p11.is_zero() and q11.is_zero(), "P_11 or Q_11 nonzero")
        r10, s10 = opalg.rs_entry(1, 0)
        _, s11 = opalg.rs_entry(1, 1)
        rec.require(r10 == -(N * N - D), "R_10 differs from -(N^2 - Delta)")
        rec.require(s10 == -(D * N), "S_10 differs from -Delta N")
        rec.require(s11 == N, "S_11 differs from N")
        rec.require(opalg.z_operator(1) == ID * 2, "Z_1 differs from 2 Id")
    return _run(2, "recursion cross-checks", 1.0, body)


def check_grading(k_max: int = 8) -> CheckResult:
    def body(rec):
        ctx = symcalc.HeisenbergPlaneContext()
        powers = {}
        for k in range(1, k_max + 1):
            degs = opalg.d_operator(k).degrees()
            rec.require(degs <= {k - 1}, f"D_{k} has word degrees {sorted(degs)}")
            rec.require(len(opalg.d_operator(k).pi_powers()) <= 1,
                        f"D_{k} mixes pi powers")
            integ = symcalc.integrand(ctx, k)
            rec.require(integ.is_monomial(), f"D_{k}(1) on the plane is not a monomial")
            powers[k] = integ.power()
        rec.details["plane_powers"] = powers
    return _run(3, "grading and monomial restrictions, k <= 8", 10.0, body)


# published a_3 and a_5 integrand constants, multiplying r^-2 and r^-4
REFERENCE_A3 = _pi(Fraction(-3, 8))
REFERENCE_A5 = _pi(Fraction(73, 640))


def heisenberg_comparison(trunc: int = symcalc.DEFAULT_TRUNC) -> Dict[str, dict]:
    """Computed a_k integrands (-D_k(1) on the plane) next to the published constants."""
    ctx = symcalc.HeisenbergPlaneContext(trunc)
    out = {}
    for k, ref, power in ((3, REFERENCE_A3, -2), (5, REFERENCE_A5, -4)):
        integ = -symcalc.integrand(ctx, k)
        c = integ.value()
        out[f"a{k}"] = {
            "computed": c.to_json(), "computed_power": integ.power(),
            "reference": ref.to_json(), "reference_power": power,
            "match": c == ref and (integ.power() == power),
            "difference": (c - ref).to_json(),
        }
    return out


def check_heisenberg_integrands() -> CheckResult:
    def body(rec):
        ctx = symcalc.HeisenbergPlaneContext()
        a3 = -symcalc.integrand(ctx, 3)
        a5 = -symcalc.integrand(ctx, 5)
        rec.require(a3.is_monomial() and (a3.is_zero() or a3.power() == -2),
                    f"a_3 integrand {a3} is not c r^-2")
        rec.require(a5.is_monomial() and not a5.is_zero() and a5.power() == -4,
                    f"a_5 integrand {a5} is not a nonzero c r^-4")
        for k in (2, 4, 6, 8):
            rec.require(symcalc.integrand(ctx, k).is_zero(), f"a_{k} integrand nonzero")
        # divergence of the a_5 annulus integral, convergence of the a_3 one
        i1 = heisenberg.blowup_integral(1e-3, 1.0, a5)
        i2 = heisenberg.blowup_integral(5e-4, 1.0, a5)
        rec.require(1.9 < i2 / i1 < 2.1, f"halving r_min scaled the a_5 integral by {i2 / i1:.3f}")
        rec.require(not heisenberg.converges_at_origin(-4), "r^-4 reported integrable")
        rec.require(heisenberg.converges_at_origin(-2), "r^-2 reported non-integrable")
        j1 = heisenberg.blowup_integral(1e-3, 1.0, a3)
        j2 = heisenberg.blowup_integral(1e-6, 1.0, a3)
        rec.require(abs(j2 - j1) <= 1e-2 * max(abs(j1), 1e-300) or j1 == j2,
                    "a_3 annulus integral does not settle")
        rec.details["comparison"] = heisenberg_comparison()
        rec.details["a5_ratio_on_halving"] = i2 / i1
    return _run(4, "Heisenberg a_3 / a_5 integrands (constants reported)", 10.0, body)


def check_distance(samples: int = 1000, seed: int = 20240611) -> CheckResult:
    def body(rec):
        for z in (1.0, -2.5, 1e-6, 40.0):
            got = heisenberg.distance(0.0, 0.0, z)
            rec.require(got == math.sqrt(2.0 * math.pi * abs(z)), f"axis value wrong at z = {z}")
        rng = random.Random(seed)
        worst = 0.0
        for _ in range(samples):
            x0, y0 = rng.uniform(-3, 3), rng.uniform(-3, 3)
            r0 = math.hypot(x0, y0)
            t = rng.uniform(0.0, 1.0) * r0 * math.pi / 2 * (1 - 1e-9)
            p = heisenberg.geodesic_point(x0, y0, t)
            worst = max(worst, abs(heisenberg.distance_to_plane(p).value - t))
        rec.details["endpoint_worst"] = worst
        rec.require(worst <= 1e-9, f"endpoint identity error {worst:.2e}")
        worst_dil = 0.0
        for _ in range(200):
            p = heisenberg.Point(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-3, 3))
            s = rng.uniform(0.1, 10.0)
            d, ds = heisenberg.distance_to_plane(p).value, heisenberg.distance_to_plane(p.dilate(s)).value
            worst_dil = max(worst_dil, abs(ds - s * d) / max(s * d, 1e-300))
        rec.details["dilation_worst_rel"] = worst_dil
        rec.require(worst_dil <= 1e-12, f"dilation error {worst_dil:.2e}")
        z = 1.0
        axis = math.sqrt(2.0 * math.pi * z)
        gaps = [abs(heisenberg.distance(r, 0.0, z) - axis) for r in (1e-1, 1e-2, 1e-3, 1e-4)]
        rec.details["axis_gaps"] = gaps
        rec.require(all(a > b for a, b in zip(gaps, gaps[1:])), "axis approach not monotone")
        rec.require(gaps[-1] <= 1e-6, f"axis continuity gap {gaps[-1]:.2e} at r = 1e-4")
    return _run(5, "distance formula", 30.0, body)


def check_interval(L: float = 1.0) -> CheckResult:
    def body(rec):
        samples = heatnum.interval_samples(L)
        fit = heatnum.fit_halfpowers(samples, 4)
        a0, a1, a2 = fit.coefficients[:3]
        want1 = -4.0 / math.sqrt(math.pi)
        rec.details["fit"] = fit.to_json()
        rec.require(abs(a0 - L) <= 1e-6, f"a0 = {a0!r}")
        rec.require(abs(a1 / want1 - 1) <= 1e-3, f"a1 = {a1!r}")
        rec.require(abs(a2) <= 1e-2, f"a2 = {a2!r}")
        worst = 0.0
        for t in np.geomspace(1e-9, 1e-4, 12) * L * L:
            worst = max(worst, abs(heatnum.interval_heat_content(L, t)
                                   - (L - 4.0 * math.sqrt(t / math.pi))))
        rec.details["remainder_worst"] = worst
        rec.require(worst < 1e-10, f"remainder {worst:.2e}")
    return _run(6, "interval end to end", 10.0, body)


def disk_reference(R: float):
    return -4.0 * math.sqrt(math.pi) * R, math.pi


def check_disk(R: float = 1.0, m: int = 4) -> CheckResult:
    def body(rec):
        samples = heatnum.disk_heat_content(R)
        fit = heatnum.fit_halfpowers(samples, m)
        a1, a2 = disk_reference(R)
        rel1 = abs(fit.coefficients[1] / a1 - 1)
        rel2 = abs(fit.coefficients[2] / a2 - 1)
        rec.details.update(fit=fit.to_json(), rel_a1=rel1, rel_a2=rel2)
        rec.require(rel1 <= 1e-2, f"a1 off by {rel1:.2%}")
        rec.require(rel2 <= 1e-2, f"a2 off by {rel2:.2%}")
        t_probe = [1e-2 * R * R]
        q = [heatnum.disk_heat_content(R, t_probe, grid=(250 * 2 ** i, 12 * 2 ** i)).Q[0]
             for i in range(3)]
        ratio = (q[0] - q[1]) / (q[1] - q[2])
        rec.details["refinement_ratio"] = ratio
        rec.require(3.0 <= ratio <= 5.0, f"refinement ratio {ratio:.3f}")
    return _run(7, "disk end to end (Crank-Nicolson)", 120.0, body)


class PolyGaussian:
    """p(r) exp(-r^2 / w) with p a polynomial; closed under d/dr."""

    def __init__(self, coeffs, w: float):
        self.p = np.polynomial.Polynomial(coeffs)
        self.w = w

    def __call__(self, r: float) -> float:
        return float(self.p(r)) * math.exp(-r * r / self.w)

    def derivative(self) -> "PolyGaussian":
        x = np.polynomial.Polynomial([0, 1])
        return PolyGaussian((self.p.deriv() - (2.0 / self.w) * x * self.p).coef, self.w)

    def one_minus_d2(self) -> "PolyGaussian":
        d2 = self.derivative().derivative()
        n = max(len(self.p.coef), len(d2.p.coef))
        c = np.zeros(n)
        c[: len(self.p.coef)] += self.p.coef
        c[: len(d2.p.coef)] -= d2.p.coef
        return PolyGaussian(c, self.w)


def manufactured_exp_problem(depth: int, w: float = 50.0, support: float = 60.0):
    """F(t, r) = e^t g(r) with g = (1 + r/2) exp(-r^2/w), so L^k F = e^t (1 - d_r^2)^k g."""
    gs = [PolyGaussian([1.0, 0.5], w)]
    for _ in range(depth + 1):
        gs.append(gs[-1].one_minus_d2())
    lf = tuple((lambda g: (lambda t, r: math.exp(t) * g(r)))(g) for g in gs[1:])
    flux = tuple((lambda dg0: (lambda t: math.exp(t) * dg0))(g.derivative()(0.0)) for g in gs[1:])
    g0 = gs[0]
    problem = heatnum.HalfLineProblem(f=lf[0], v0=g0, v1=lambda t: math.exp(t) * g0.derivative()(0.0),
                                      support=support, lf=lf, lf_flux=flux)
    exact = lambda t, r: math.exp(t) * g0(r)
    return problem, exact


def remainder_slopes(depths=(0, 1, 2), times=None, tol: float = 1e-13) -> Dict[int, float]:
    """Log-log slope of |remainder| against t for each iterated depth."""
    times = 0.01 * 2.0 ** -np.arange(6) if times is None else np.asarray(times)
    problem, _ = manufactured_exp_problem(max(depths))
    out = {}
    for m in depths:
        rem = [abs(heatnum.iterated_duhamel_eval(problem, m, float(t), tol).remainder)
               for t in times]
        out[m] = float(np.polyfit(np.log(times), np.log(rem), 1)[0])
    return out


def check_duhamel() -> CheckResult:
    def body(rec):
        v = lambda t, r: (1 + t) * math.exp(-r * r)
        f = lambda t, r: math.exp(-r * r) - (1 + t) * (4 * r * r - 2) * math.exp(-r * r)
        p = heatnum.HalfLineProblem(f=f, v0=lambda r: math.exp(-r * r), support=10.0)
        worst = max(abs(heatnum.duhamel_eval(p, t, r) - v(t, r))
                    for t, r in ((0.05, 0.0), (0.3, 0.5), (1.0, 1.5), (2.0, 0.2)))
        rec.details["manufactured_worst"] = worst
        rec.require(worst <= 1e-6, f"manufactured error {worst:.2e}")
        problem, exact = manufactured_exp_problem(2)
        worst_it = max(abs(heatnum.iterated_duhamel_eval(problem, m, 0.05, 1e-11).value
                           - exact(0.05, 0.0)) for m in (0, 1, 2))
        rec.details["iterated_worst"] = worst_it
        rec.require(worst_it <= 1e-6, f"iterated value error {worst_it:.2e}")
        slopes = remainder_slopes()
        sqrt_slopes = {m: 2 * s for m, s in slopes.items()}
        rec.details["remainder_slopes_log_t"] = slopes
        rec.details["remainder_slopes_log_sqrt_t"] = sqrt_slopes
        # the stated target is slope m + 1 against log sqrt(t); smooth data give
        # a remainder of exact order t^(m+1), i.e. slope 2(m + 1) in sqrt(t)
        for m, s in sqrt_slopes.items():
            rec.require(abs(s - (m + 1)) <= 0.1,
                        f"depth {m}: slope {s:.3f} in log sqrt(t), expected {m + 1}")
        norm = max(abs(heatnum.kernel_apply(t, r, lambda s: 1.0, 60.0, 1e-13) - 1.0)
                   for t in (1e-4, 1e-2, 1.0) for r in (0.0, 0.3, 2.0))
        rec.details["kernel_normalisation"] = norm
        rec.require(norm <= 1e-10, f"kernel mass error {norm:.2e}")
    return _run(8, "Duhamel machinery", 30.0, body)


def check_mean_value() -> CheckResult:
    def body(rec):
        one = heatnum.polynomial_test_function("disk", [1.0])
        res1 = max(heatnum.mean_value_residual("disk", one, r) for r in (0.1, 0.4, 0.7))
        rec.details["disk_v1"] = res1
        rec.require(res1 <= 1e-8, f"disk v = 1 residual {res1:.2e}")
        worst = 0.0
        for geo, coeffs in (("disk", [0, 0, 1]), ("disk", [1, 0, 2, 0, -0.5]),
                            ("interval", [1]), ("interval", [0, 1, 0, 3])):
            v = heatnum.polynomial_test_function(geo, coeffs)
            worst = max(worst, heatnum.mean_value_residual(geo, v, 0.2))
        gauss = heatnum.RadialTestFunction(lambda p: math.exp(-p * p),
                                           lambda p: (4 * p * p - 4) * math.exp(-p * p))
        worst = max(worst, heatnum.mean_value_residual("disk", gauss, 0.3))
        rec.details["general_worst"] = worst
        rec.require(worst <= 1e-6, f"general residual {worst:.2e}")
    return _run(9, "mean value identity residual", 10.0, body)


ROUNDING_SLACK = 1e-12


def check_maximum_principle(R: float = 1.0, R_big: float = 1.25, h: float = 1.0 / 400) -> CheckResult:
    def body(rec):
        times = heatnum.default_times(R)
        small = heatnum.disk_heat_content(R, times, grid=(0, 24), mesh=heatnum.RadialMesh.uniform(R, h),
                                          keep_profiles=True)
        big = heatnum.disk_heat_content(R_big, times, grid=(0, 24),
                                        mesh=heatnum.RadialMesh.uniform(R_big, h), keep_profiles=True)
        graded = heatnum.disk_heat_content(R)
        for s in (small, big, graded):
            rec.require(s.u_min >= -ROUNDING_SLACK and s.u_max <= 1 + ROUNDING_SLACK,
                        f"u range [{s.u_min!r}, {s.u_max!r}] on {s.params['n_r']} cells")
            rec.require(s.is_nonincreasing(), "Q increased between samples")
        n = len(small.centers)
        rec.require(np.allclose(small.centers, big.centers[:n], rtol=0, atol=1e-14),
                    "meshes do not share cells")
        gap = float((small.profiles - big.profiles[:, :n]).max())
        rec.details.update(max_u_small_minus_big=gap, u_range=[graded.u_min, graded.u_max])
        rec.require(gap <= ROUNDING_SLACK, f"u_R exceeds u_R' by {gap:.2e}")
        rec.require(bool(np.all(small.Q <= big.Q)), "Q_R exceeds Q_R'")
    return _run(10, "maximum principle and domain monotonicity", 60.0, body)


CHECKS = (check_operator_table, check_recursion_identities, check_grading,
          check_heisenberg_integrands, check_distance, check_interval, check_disk,
          check_duhamel, check_mean_value, check_maximum_principle)


def run_all() -> List[CheckResult]:
    return [check() for check in CHECKS]

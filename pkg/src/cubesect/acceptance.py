"""The acceptance suite: twelve end-to-end checks with time limits.

Shared by ``cubesect all`` and the test-suite; each check returns a
:class:`CriterionResult` whose ``detail`` says what was compared.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import box_density, critical, hessian, laplace_polya, sinc_quad
from .report import rat
from .sinc_quad import QuadratureConfig

__all__ = ["CriterionResult", "CRITERIA", "run", "run_one", "J0_VALUES", "XI_VALUES"]

J0_VALUES = {
    1: "1/1",
    2: "1/1",
    3: "3/4",
    4: "2/3",
    5: "115/192",
    6: "11/20",
    7: "5887/11520",
    8: "151/315",
    9: "259723/573440",
    10: "15619/36288",
}
XI_VALUES = {4: 0.632455, 5: 0.634265, 6: 0.636071, 7: 0.636935, 8: 0.637520, 9: 0.637921, 10: 0.638219}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name} ({self.seconds:.2f}s / {self.limit:g}s)"

    def to_dict(self):
        return {
            "criterion": self.number,
            "name": self.name,
            "pass": self.passed,
            "seconds": round(self.seconds, 3),
            "limit": self.limit,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Settings:
    quad: QuadratureConfig = QuadratureConfig(abs_tol=1e-12)
    root_tol: float = 1e-10
    check_tol: float = 1e-8
    jobs: int = 1


def c1_j0_values(s):
    got = {n: rat(laplace_polya.j_value(n, 0)) for n in J0_VALUES}
    rec = {n: rat(laplace_polya.j_recursive(n, 0)) for n in J0_VALUES}
    bad = [n for n in J0_VALUES if got[n] != J0_VALUES[n] or rec[n] != J0_VALUES[n]]
    return not bad, {"values": got, "mismatches": bad}


def c2_ratios_n4(s):
    J, c = laplace_polya.j_value, laplace_polya.c_ratio
    checks = {
        "J4(2)/J4(0)": (J(4, 2) / J(4, 0), Fraction(1, 4)),
        "J4(3)/J4(1)": (J(4, 3) / J(4, 1), Fraction(1, 23)),
        "c_4,0": (c(4, 0), Fraction(1, 4)),
        "c_4,1": (c(4, 1), Fraction(1, 21)),
        "J4(1)/J4(-1)": (J(4, 1) / J(4, -1), Fraction(1)),
        "c_4,-1": (c(4, -1), Fraction(1)),
        "J4(4)": (J(4, 4), Fraction(0)),
        "c_4,2": (c(4, 2), Fraction(0)),
    }
    bad = [k for k, (a, b) in checks.items() if a != b]
    return not bad, {"values": {k: a for k, (a, _) in checks.items()}, "mismatches": bad}


def c3_ratio(s):
    rep = laplace_polya.verify_ratio_theorem(40, keep_entries=False)
    eq = {tuple(e) for e in rep.info["equality_cases"]}
    endpoints = {(n, r) for n in range(4, 41) for r in (-1, n - 2)}
    interior = sorted(eq - endpoints)
    ok = rep.passed and endpoints <= eq and interior == [(4, 0)]
    return ok, {
        "checked": rep.checked,
        "violations": len(rep.violations),
        "all_endpoints_equal": endpoints <= eq,
        "interior_equalities": interior,
    }


def c4_corollary(s):
    rep = laplace_polya.verify_corollary(60, keep_entries=False)
    return rep.passed, {"checked": rep.checked, "violations": len(rep.violations)}


def c5_eulerian(s):
    rep = laplace_polya.verify_eulerian_bounds(50, keep_entries=False)
    return rep.passed, {"checked": rep.checked, "violations": len(rep.violations), **rep.info}


def c6_xi(s):
    out, ok = {}, True
    for n, want in XI_VALUES.items():
        res = critical.find_xi(n, s.root_tol, s.quad, jobs=s.jobs)
        good = abs(res.xi - want) <= 1e-5
        if n == 4:
            good = good and abs(res.xi - math.sqrt(0.4)) <= 1e-9
        ok &= good
        out[n] = {"xi": res.xi, "expected": want, "F_residual": res.F_residual, "ok": good}
    return ok, out


def c7_delta(s):
    exact = {3: Fraction(0), 4: Fraction(-1), 5: Fraction(-1, 4)}
    bad = [n for n, v in exact.items() if hessian.delta_hat(n) != v]
    neg = [n for n in range(4, 61) if not hessian.delta_hat(n) < 0]
    verdicts = [n for n in range(4, 61) if hessian.local_max_certificate(n).verdict != "strict-local-max"]
    return not (bad or neg or verdicts), {"exact_mismatch": bad, "nonnegative": neg, "not_certified": verdicts}


def c8_saddle(s):
    out, ok = {}, True
    for n in XI_VALUES:
        xi = critical.find_xi(n, s.root_tol, s.quad, jobs=s.jobs).xi
        p = hessian.saddle_gap_paths(n, xi, s.quad)
        good = p["identity"] < -1e-4 and p["difference"] <= 1e-6
        ok &= good
        out[n] = {**p, "ok": good}
    return ok, out


def c9_oracle(s):
    rng = random.Random(20240917)
    worst = 0.0
    for _ in range(100):
        n = rng.randint(2, 10)
        v = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)]
        r = rng.randint(0, math.ceil(sum(v)))
        exact = 2 * box_density.density(v, r)
        num = sinc_quad.sinc_product_integral([float(x) for x in v], r, s.quad)
        worst = max(worst, abs(num - float(exact)))
    return worst <= 1e-9, {"cases": 100, "max_abs_error": worst}


def c10_criticality(s):
    out = {}
    for n in range(3, 11):
        out[f"d_{n}"] = float(np.max(np.abs(critical.criticality_residual(np.full(n, 1 / math.sqrt(n)), s.quad))))
    a = math.sqrt(0.4)
    w = critical.two_level(4, 2, a).vector
    out["v_4,2"] = float(np.max(np.abs(critical.criticality_residual(w / np.linalg.norm(w), s.quad))))
    off = float(np.max(np.abs(critical.criticality_residual([0.8, 0.6], s.quad))))
    ok = all(x <= 1e-9 for x in out.values()) and off >= 1e-3
    return ok, {**out, "(0.8,0.6)": off}


def _random_unit(rng, n, floor=0.1):
    while True:
        v = rng.normal(size=n)
        v /= np.linalg.norm(v)
        if np.min(np.abs(v)) >= floor:
            return v


def finite_difference_errors(v, cfg, h1=1e-5, h2=1e-4):
    """Largest deviations of ``sigma_grad`` and the Hessian entries from
    central differences at the unit vector ``v``."""
    n = len(v)
    grad = sinc_quad.sigma_grad(v, cfg)
    tangent = grad - np.dot(grad, v) * v
    fd = np.empty(n)
    for k in range(n):
        e = np.zeros(n)
        e[k] = h1
        fd[k] = (sinc_quad.sigma_num(v + e, cfg) - sinc_quad.sigma_num(v - e, cfg)) / (2 * h1)
    fd -= np.dot(fd, v) * v
    grad_err = float(np.max(np.abs(fd - tangent)))

    sigma = sinc_quad.sigma_num(v, cfg)
    hess_err = 0.0
    for k in range(n):
        e = np.zeros(n)
        e[k] = h2
        gp = sinc_quad.sigma_grad(v + e, cfg, require_unit=False)
        gm = sinc_quad.sigma_grad(v - e, cfg, require_unit=False)
        col = (gp - gm) / (2 * h2)
        hess_err = max(hess_err, abs(col[k] + sigma - sinc_quad.beta_entry(v, k, cfg)))
        for j in range(n):
            if j != k:
                hess_err = max(hess_err, abs(col[j] - sinc_quad.gamma_entry(v, j, k, cfg)))
    return grad_err, hess_err


def c11_finite_differences(s):
    rng = np.random.default_rng(7)
    gworst = hworst = 0.0
    for i in range(20):
        v = _random_unit(rng, (4, 5, 6)[i % 3])
        g, h = finite_difference_errors(v, s.quad)
        gworst, hworst = max(gworst, g), max(hworst, h)
    return gworst <= 1e-5 and hworst <= 1e-4, {"vectors": 20, "grad_max_err": gworst, "hessian_max_err": hworst}


def c12_asymptotics(s):
    C = laplace_polya.ASYMPTOTIC_ERROR_CONSTANT
    worst = max(
        n**4 * abs(float(laplace_polya.j_value(n, 0) - Fraction(laplace_polya.asymptotic_j0(n, 3))))
        for n in range(50, 501)
    )
    scaled = math.sqrt(2000) * float(laplace_polya.j_value(2000, 0))
    target = math.sqrt(6 * math.pi)
    mono = laplace_polya.monotonicity_report(200, keep_entries=False)
    parts = {
        "error_bound": worst <= C,
        "limit_sqrt_6pi": abs(scaled - target) <= 1e-2,
        "monotonicity": mono.passed,
    }
    return all(parts.values()), {
        "C": C,
        "max_n4_error": worst,
        "sqrt_n_J_n0_at_2000": scaled,
        "target": target,
        "sqrt_6_over_pi": math.sqrt(6 / math.pi),
        "parts": parts,
    }


CRITERIA = [
    (1, "exact J_n(0) for n <= 10", 1.0, c1_j0_values),
    (2, "ratios J_4(r+2)/J_4(r)", 1.0, c2_ratios_n4),
    (3, "ratio inequality sweep n <= 40", 30.0, c3_ratio),
    (4, "corollary sweep n <= 60", 10.0, c4_corollary),
    (5, "Eulerian bounds m <= 50", 60.0, c5_eulerian),
    (6, "roots xi_n for n = 4..10", 300.0, c6_xi),
    (7, "delta certificate n <= 60", 5.0, c7_delta),
    (8, "saddle gap at xi_n", 600.0, c8_saddle),
    (9, "quadrature vs exact density", 120.0, c9_oracle),
    (10, "criticality residuals", 60.0, c10_criticality),
    (11, "finite-difference gradient/Hessian", 300.0, c11_finite_differences),
    (12, "asymptotics and monotonicity", 60.0, c12_asymptotics),
]


def run_one(number: int, settings: Settings | None = None) -> CriterionResult:
    settings = settings or Settings()
    num, name, limit, fn = next(c for c in CRITERIA if c[0] == number)
    t0 = time.perf_counter()
    try:
        ok, detail = fn(settings)
    except Exception as exc:  # a crash is a failed criterion with a record
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    dt = time.perf_counter() - t0
    if dt > limit:
        ok = False
        detail = {**detail, "timeout": True}
    return CriterionResult(num, name, ok, dt, limit, detail)


def run(numbers=None, settings: Settings | None = None, fail_fast: bool = False, on_result=None):
    results = []
    for num, *_ in CRITERIA:
        if numbers is not None and num not in numbers:
            continue
        res = run_one(num, settings)
        results.append(res)
        if on_result:
            on_result(res)
        if fail_fast and not res.passed:
            break
    return results

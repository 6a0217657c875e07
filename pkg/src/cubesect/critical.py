"""Two-level directions ``(a, ..., a, b, ..., b)`` and their criticality.

``v_{n,k}(a)`` has ``k`` coordinates equal to ``a`` and ``n - k`` equal to
``b = sqrt((1 - k a^2) / (n - k))``; ``a`` ranges over ``I_k = [1/sqrt(n),
1/sqrt(k)]``.  It is a critical direction of the section function exactly
when ``F_{n,k}(a) = 0``.  Both ends of ``I_k`` are zeros; for ``k = 2`` there
is a further zero ``xi_n`` inside, which :func:`find_xi` locates.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .box_density import abs_moment, section_volume
from .errors import NonConvergent, NoSignChange
from .laplace_polya import j_value
from .sinc_quad import DEFAULT, QuadratureConfig, sigma_num, sinc_product_integral

__all__ = [
    "TwoLevelDirection",
    "RootResult",
    "b_of",
    "two_level",
    "F",
    "F_via_sections",
    "F_prime_at_diag",
    "gamma_threshold",
    "s1_closed",
    "s2_closed",
    "F_closed",
    "lemma3_lower_bound",
    "find_xi",
    "criticality_residual",
    "scan_F",
    "scan_csv",
    "default_jobs",
]

_EDGE = 1e-12  # slack when testing a against the ends of I_k
SCAN_STOP = 1e-6  # scans for k = 2, 3 end this far left of 1/sqrt(k)


def _check_nk(n, k):
    if n < 4:
        raise ValueError("n must be >= 4")
    if not 2 <= k <= n - 2:
        raise ValueError("k must satisfy 2 <= k <= n - 2")


def b_of(n: int, k: int, a: float) -> float:
    """Value of the ``n - k`` trailing coordinates of the unit vector ``v_{n,k}(a)``."""
    _check_nk(n, k)
    lo, hi = 1 / math.sqrt(n), 1 / math.sqrt(k)
    if not lo - _EDGE <= a <= hi + _EDGE:
        raise ValueError(f"a={a!r} outside [{lo}, {hi}]")
    if a == lo:
        return lo
    return math.sqrt(_one_minus_ka2(k, a) / (n - k))


def _one_minus_ka2(k, a):
    # a float within a few ulps of 1/sqrt(k) is taken as the endpoint itself
    rest = 1.0 - k * a * a
    return 0.0 if rest <= 8 * k * 2.0**-52 else rest


@dataclass(frozen=True)
class TwoLevelDirection:
    n: int
    k: int
    a: float

    @property
    def b(self) -> float:
        return b_of(self.n, self.k, self.a)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a] * self.k + [self.b] * (self.n - self.k))


def two_level(n: int, k: int, a: float) -> TwoLevelDirection:
    b_of(n, k, a)  # validates
    return TwoLevelDirection(n, k, float(a))


def F(n: int, k: int, a: float, cfg: QuadratureConfig = DEFAULT) -> float:
    """``F_{n,k}(a)``, whose zeros in ``I_k`` are the critical two-level directions."""
    b = b_of(n, k, a)
    if b == 0 and k < 4:
        # the first integral only converges conditionally at a = 1/sqrt(k)
        raise ValueError("F needs b > 0 for k < 4; a must be left of 1/sqrt(k)")
    i1 = sinc_product_integral([b] * (n - k) + [a] * (k - 1), a, cfg)
    i2 = sinc_product_integral([b] * (n - k - 1) + [a] * k, b, cfg)
    return i1 / (1 - a * a) - i2 / (1 - b * b)


def F_via_sections(n: int, k: int, a: float) -> float:
    """``F_{n,k}(a)`` from exact-density section volumes in float mode.

    ``u1`` drops one ``a`` coordinate and ``u2`` one ``b`` coordinate of
    ``v_{n,k}(a)``; then ``F = s(u1, a/2) / (1-a^2)^1.5 - s(u2, b/2) / (1-b^2)^1.5``.
    """
    b = b_of(n, k, a)
    u1 = [a] * (k - 1) + [b] * (n - k)
    u2 = [a] * k + [b] * (n - k - 1)
    s1 = section_volume(u1, a / 2)
    s2 = section_volume(u2, b / 2)
    return s1 / (1 - a * a) ** 1.5 - s2 / (1 - b * b) ** 1.5


def F_prime_at_diag(n: int, k: int) -> Fraction:
    """Exact right-hand derivative of ``F_{n,k}`` at ``a = 1/sqrt(n)``."""
    _check_nk(n, k)
    bracket = Fraction(n + 1, n) * j_value(n, 0) - j_value(n - 2, 0)
    return Fraction(n**3, (n - k) * (n - 1)) * bracket


def gamma_threshold(n: int) -> float:
    """``sqrt((n-2)/(2n-3))``: from here to ``1/sqrt(2)``, ``F_{n,2} >= 0``."""
    if n < 4:
        raise ValueError("n must be >= 4")
    return math.sqrt((n - 2) / (2 * n - 3))


def _check_projection_range(n, a):
    if not gamma_threshold(n) - _EDGE <= a <= 1 / math.sqrt(2) + _EDGE:
        raise ValueError(f"closed forms need gamma_n <= a <= 1/sqrt(2), got a={a!r}")


def s1_closed(a: float) -> float:
    """Section volume ``s(u1(a), a/2) = sqrt(1-a^2) / (2a)`` (``k = 2``)."""
    return math.sqrt(1 - a * a) / (2 * a)


def s2_closed(n: int, a: float) -> float:
    """Section volume ``s(u2(a), b/2)`` for ``k = 2`` and ``a >= gamma_n``."""
    _check_projection_range(n, a)
    b = b_of(n, 2, a)
    m1 = float(abs_moment(n - 3, Fraction(1, 2)))
    return math.sqrt(1 - b * b) / a * (1 - b / a * m1)


def F_closed(n: int, a: float) -> float:
    """``F_{n,2}(a)`` assembled from :func:`s1_closed` and :func:`s2_closed`."""
    _check_projection_range(n, a)
    b = b_of(n, 2, a)
    return s1_closed(a) / (1 - a * a) ** 1.5 - s2_closed(n, a) / (1 - b * b) ** 1.5


def lemma3_lower_bound(n: int, a: float) -> float:
    """Lower bound for ``F_{n,2}(a)`` on ``[gamma_n, 1/sqrt(2)]``; nonnegative there."""
    _check_projection_range(n, a)
    a2 = a * a
    root = math.sqrt(_one_minus_ka2(2, a))
    lead = root / (2 * a2 * (1 - a2) * (n - 3 + 2 * a2))
    return lead * (math.sqrt(n - 2) * (1 - a2) - (n - 1) * a * root)


def criticality_residual(v, cfg: QuadratureConfig = DEFAULT) -> np.ndarray:
    """Per-coordinate defect of the critical-direction condition.

    ``residual_j = sigma(v) - (1/(pi (1 - v_j^2))) int prod_{i != j} sinc(v_i t) cos(v_j t) dt``;
    all entries vanish exactly when ``v`` is critical.
    """
    v = np.abs(np.asarray(v, dtype=float))
    if abs(math.sqrt(math.fsum(v * v)) - 1) > 1e-12:
        raise ValueError("expected a unit vector")
    if np.any(v * v >= 1):
        raise ValueError("every coordinate must satisfy v_j^2 < 1")
    sigma = sigma_num(v, cfg)
    out = np.empty(len(v))
    cache = {}
    for j, vj in enumerate(v):
        if vj not in cache:
            rest = np.delete(v, j)
            cache[vj] = sinc_product_integral(rest, vj, cfg) / (1 - vj * vj)
        out[j] = sigma - cache[vj]
    return out


def default_jobs() -> int:
    env = os.environ.get("CUBESECT_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _F_job(args):
    n, k, a, cfg = args
    return F(n, k, a, cfg)


def _map_F(n, k, grid, cfg, jobs):
    tasks = [(n, k, float(a), cfg) for a in grid]
    if jobs <= 1 or len(tasks) < 8:
        return [_F_job(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map keeps input order, so the output does not depend on scheduling
        return list(pool.map(_F_job, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def _scan_hi(n, k, a_hi):
    cap = 1 / math.sqrt(k) - SCAN_STOP if k in (2, 3) else 1 / math.sqrt(k)
    return min(a_hi, cap)


def scan_F(n, k, a_lo=None, a_hi=None, samples=200, cfg: QuadratureConfig = DEFAULT, jobs: int = 1):
    """``samples`` equally spaced values ``(a, F_{n,k}(a))`` on ``[a_lo, a_hi]``.

    Defaults cover the whole of ``I_k``; for ``k`` in {2, 3} the right end is
    pulled in to ``1/sqrt(k) - 1e-6``, where ``F`` stays smooth.
    """
    _check_nk(n, k)
    lo = 1 / math.sqrt(n) if a_lo is None else float(a_lo)
    hi = _scan_hi(n, k, 1 / math.sqrt(k) if a_hi is None else float(a_hi))
    b_of(n, k, lo)
    b_of(n, k, hi)
    if samples < 2 or not lo < hi:
        raise ValueError("need samples >= 2 and a_lo < a_hi")
    grid = np.linspace(lo, hi, samples)
    return list(zip(grid.tolist(), _map_F(n, k, grid, cfg, jobs)))


def scan_csv(rows) -> str:
    lines = ["a,F"] + [f"{a:.17g},{f:.17g}" for a, f in rows]
    return "\n".join(lines) + "\n"


def sign_changes(values) -> list[int]:
    """Indices ``i`` with ``values[i]`` and ``values[i+1]`` of strictly opposite sign."""
    return [i for i in range(len(values) - 1) if values[i] * values[i + 1] < 0]


@dataclass
class RootResult:
    xi: float
    bracket: tuple
    F_residual: float
    criticality_residual_max: float
    iterations: int
    sign_changes: int = 0
    grid: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "xi": self.xi,
            "bracket": list(self.bracket),
            "F_residual": self.F_residual,
            "criticality_residual_max": self.criticality_residual_max,
            "iterations": self.iterations,
            "sign_changes": self.sign_changes,
            "grid": self.grid,
        }


def _refine(f, lo, hi, flo, fhi, tol, max_iter=200):
    """Bracketing root refinement: regula falsi steps (Illinois-weighted),
    replaced by bisection whenever the bracket fails to halve."""
    it = 0
    side = 0
    while hi - lo > tol:
        if it >= max_iter:
            raise NonConvergent(f"root bracket {hi - lo:.3g} after {it} iterations")
        it += 1
        width = hi - lo
        x = hi - fhi * (hi - lo) / (fhi - flo)
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
        fx = f(x)
        # an exact zero joins the right-hand side so the bracket stays closed
        if fx != 0 and (fx < 0) == (flo < 0):
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
        if hi - lo > 0.5 * width:
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            it += 1
            if fm != 0 and (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi, fhi = mid, fm
            side = 0
    return 0.5 * (lo + hi), lo, hi, it


def find_xi(n: int, tol: float = 1e-10, cfg: QuadratureConfig = DEFAULT, jobs: int = 1) -> RootResult:
    """The first zero of ``F_{n,2}`` to the right of ``1/sqrt(n)``.

    A grid on ``(1/sqrt(n) + eps0, gamma_n]`` (reaching a hair past
    ``gamma_n``, where the root sits for ``n = 4``) is doubled until it shows a
    sign change; the first one is then refined to a bracket of width ``tol``.
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    if tol < 1e-12:
        raise ValueError("tol must be >= 1e-12")
    diag = 1 / math.sqrt(n)
    gam = gamma_threshold(n)
    lo = diag + 1e-3 * (gam - diag)
    hi = min(gam + 0.01, 1 / math.sqrt(2) - SCAN_STOP)
    samples = 32
    while True:
        grid = np.linspace(lo, hi, samples)
        vals = _map_F(n, 2, grid, cfg, jobs)
        changes = sign_changes(vals)
        if changes:
            break
        if samples >= 2**14:
            raise NoSignChange(f"F_{n},2 shows no sign change on [{lo}, {hi}] with {samples} samples")
        samples *= 2
    i = changes[0]

    def f(a):
        return F(n, 2, a, cfg)

    xi, blo, bhi, iters = _refine(f, float(grid[i]), float(grid[i + 1]), vals[i], vals[i + 1], tol)
    w = two_level(n, 2, xi).vector
    crit = float(np.max(np.abs(criticality_residual(w / np.linalg.norm(w), cfg))))
    return RootResult(
        xi=xi,
        bracket=(float(blo), float(bhi)),
        F_residual=f(xi),
        criticality_residual_max=crit,
        iterations=iters,
        sign_changes=len(changes),
        grid={"lo": float(lo), "hi": float(hi), "samples": samples},
    )

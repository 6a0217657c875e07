"""Second-order tests for the section function on the unit sphere.

At the main diagonal ``d_n`` the bordered Hessian of the Lagrangian has the
pattern

    [[0, a, a, ..., a],
     [a, b, g, ..., g],
     [a, g, b, ..., g],
     ...]

whose leading minors are ``H_m = -(m-1) a^2 (b - g)^(m-2)``.  All of
``(-1)^(m-1) H_m`` are positive exactly when ``b - g < 0``, and the sign of
``b - g`` is that of the rational :func:`delta_hat`.

At the two-level critical direction ``w = v_{n,2}(xi_n)`` the quadratic form
along ``(1, -1, 0, ..., 0)`` is ``2 (beta_1(w) - gamma_12(w))``; a negative
value next to the local maximum at ``d_n`` makes ``w`` a saddle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .box_density import RadicalValue
from .critical import two_level
from .errors import ConsistencyError
from .laplace_polya import j_value
from .report import Report
from .sinc_quad import DEFAULT, QuadratureConfig, beta_entry, gamma_entry, sigma_num

__all__ = [
    "HessianSummary",
    "delta_hat",
    "beta_hat",
    "gamma_hat",
    "delta_negative_certificate",
    "pattern_matrix",
    "principal_minor",
    "local_max_certificate",
    "saddle_gap",
    "saddle_gap_paths",
    "saddle_upper_bound",
    "diag_prefactor",
]

_DIRECT_MAX_M = 8


def beta_hat(n: int) -> Fraction:
    """``(4-n) J_{n-2}(0) + (n^2+2)/(n-2) J_{n-2}(2)``: ``beta_k(d_n)`` without its positive prefactor."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return (4 - n) * j_value(n - 2, 0) + Fraction(n * n + 2, n - 2) * j_value(n - 2, 2)


def gamma_hat(n: int) -> Fraction:
    """``J_{n-2}(0) - J_{n-2}(2)``: ``gamma_jk(d_n)`` without its positive prefactor."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return j_value(n - 2, 0) - j_value(n - 2, 2)


def delta_hat(n: int) -> Fraction:
    """``(3-n) J_{n-2}(0) + n(n+1)/(n-2) J_{n-2}(2)``, carrying the sign of ``beta - gamma`` at ``d_n``."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return (3 - n) * j_value(n - 2, 0) + Fraction(n * (n + 1), n - 2) * j_value(n - 2, 2)


def diag_prefactor(n: int) -> float:
    """``n^(3/2) / (2(n-1))``; ``beta_k(d_n)`` and ``gamma_jk(d_n)`` are this times the hats."""
    return n**1.5 / (2 * (n - 1))


def delta_negative_certificate(n_lo: int, n_hi: int | None = None) -> Report:
    """Check ``delta_hat(n) <= -12/(n^2-4) J_{n-2}(0) < 0`` exactly for ``n_lo <= n <= n_hi``."""
    n_hi = n_lo if n_hi is None else n_hi
    if n_lo < 6:
        raise ValueError("the certificate applies from n = 6")
    rep = Report("delta-negative", {"n": [n_lo, n_hi]})
    for n in range(n_lo, n_hi + 1):
        lhs = delta_hat(n)
        rhs = Fraction(-12, n * n - 4) * j_value(n - 2, 0)
        rep.record({"n": n}, lhs, rhs, lhs <= rhs < 0)
    return rep


def pattern_matrix(m: int, alpha, beta, gamma):
    """The ``m x m`` bordered pattern matrix as nested lists."""
    rows = [[0] + [alpha] * (m - 1)]
    for i in range(1, m):
        rows.append([alpha] + [beta if j == i else gamma for j in range(1, m)])
    return rows


def _det_exact(rows) -> Fraction:
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return det


def _is_exact(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def principal_minor(m: int, alpha, beta, gamma, *, rel_tol: float = 1e-10):
    """``H_m = -(m-1) alpha^2 (beta - gamma)^(m-2)``, cross-checked by a direct determinant.

    ``alpha`` may be a :class:`RadicalValue`; the minor depends on it only
    through ``alpha^2``, so the result stays exact for rational
    ``alpha^2, beta, gamma``.  For ``m <= 8`` the determinant of the pattern
    matrix is computed as well and a mismatch raises
    :class:`ConsistencyError`.
    """
    if m < 3:
        raise ValueError("m must be >= 3")
    if isinstance(alpha, RadicalValue):
        a2 = alpha.square()
    else:
        a2 = alpha * alpha
    delta = beta - gamma
    closed = -(m - 1) * a2 * delta ** (m - 2)
    if m <= _DIRECT_MAX_M:
        # every term of the determinant picks alpha once from the border row and
        # once from the border column, so det = alpha^2 * det(alpha = 1)
        unit = pattern_matrix(m, 1, beta, gamma)
        if all(_is_exact(x) for x in (a2, beta, gamma)):
            direct = a2 * _det_exact(unit)
            ok = direct == closed
        else:
            direct = float(a2) * float(np.linalg.det(np.array(unit, dtype=float)))
            scale = abs(float(a2)) * max(1.0, abs(float(beta)) + (m - 1) * abs(float(gamma))) ** (m - 2) * (m - 1)
            ok = abs(direct - float(closed)) <= rel_tol * max(abs(float(closed)), scale * 1e-6)
        if not ok:
            raise ConsistencyError(f"H_{m}: closed form {closed} != determinant {direct}")
    return closed


@dataclass
class HessianSummary:
    n: int
    alpha: RadicalValue
    delta_hat: Fraction
    minor_signs: list = field(default_factory=list)
    verdict: str = "inconclusive"

    def to_dict(self):
        return {
            "n": self.n,
            "alpha": self.alpha,
            "delta_hat": self.delta_hat,
            "minor_signs": self.minor_signs,
            "verdict": self.verdict,
        }


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def local_max_certificate(n: int) -> HessianSummary:
    """Signs of ``(-1)^(m-1) H_m``, ``m = 3..n``, at ``d_n`` and the resulting verdict.

    ``beta`` and ``gamma`` enter through their hats; dropping the common
    positive prefactor ``c`` scales ``H_m`` by ``c^(m-2) > 0`` and leaves
    every sign unchanged.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    alpha = RadicalValue(2, Fraction(1, n))
    b, g = beta_hat(n), gamma_hat(n)
    d = delta_hat(n)
    if b - g != d:
        raise ConsistencyError(f"beta_hat - gamma_hat != delta_hat at n={n}")
    signs = [_sign((-1) ** (m - 1) * principal_minor(m, alpha, b, g)) for m in range(3, n + 1)]
    verdict = "strict-local-max" if signs and all(s > 0 for s in signs) else "inconclusive"
    if (verdict == "strict-local-max") != (d < 0):
        raise ConsistencyError(f"minor signs disagree with the sign of delta_hat at n={n}")
    return HessianSummary(n=n, alpha=alpha, delta_hat=d, minor_signs=signs, verdict=verdict)


def _saddle_direction(n, xi):
    if n < 4:
        raise ValueError("n must be >= 4")
    if not 1 / math.sqrt(n) < xi < 1 / math.sqrt(2):
        raise ValueError("need 1/sqrt(n) < xi < 1/sqrt(2)")
    w = two_level(n, 2, xi).vector
    return w / np.linalg.norm(w)


def saddle_gap_paths(n: int, xi: float, cfg: QuadratureConfig = DEFAULT) -> dict:
    """``beta_1(w) - gamma_12(w)`` at ``w = v_{n,2}(xi)`` by two independent routes.

    ``identity`` uses ``sigma(w)`` and the exact ``sigma(d_{n-2})``; ``direct``
    integrates the two Hessian entries.
    """
    w = _saddle_direction(n, xi)
    x2 = xi * xi
    sigma_low = math.sqrt(n - 2) * float(j_value(n - 2, 0))
    identity = ((1 + x2) * sigma_num(w, cfg) - sigma_low / math.sqrt(1 - 2 * x2)) / x2
    direct = beta_entry(w, 0, cfg) - gamma_entry(w, 0, 1, cfg)
    return {"identity": identity, "direct": direct, "difference": abs(identity - direct)}


def saddle_gap(n: int, xi: float, cfg: QuadratureConfig = DEFAULT, check_tol: float = 1e-6) -> float:
    """``beta_1(w) - gamma_12(w)`` from the identity route, after the direct
    route has been confirmed to agree within ``check_tol``."""
    paths = saddle_gap_paths(n, xi, cfg)
    if not paths["difference"] <= check_tol:
        raise ConsistencyError(
            f"saddle gap routes disagree at n={n}: {paths['identity']!r} vs {paths['direct']!r}"
        )
    return paths["identity"]


def saddle_upper_bound(n: int, xi: float) -> float:
    """Envelope bounding the saddle gap from above on ``[1/sqrt(n), 1/sqrt(2))``; zero at ``1/sqrt(n)``."""
    if n < 4:
        raise ValueError("n must be >= 4")
    if not 1 / math.sqrt(n) - 1e-15 <= xi < 1 / math.sqrt(2):
        raise ValueError("need 1/sqrt(n) <= xi < 1/sqrt(2)")
    x2 = xi * xi
    root = math.sqrt(1 - 2 * x2)
    lead = n**1.5 / (n + 1) * float(j_value(n - 2, 0)) / (x2 * root)
    return lead * (root * (1 + x2) - math.sqrt(n - 2) * (n + 1) / n**1.5)

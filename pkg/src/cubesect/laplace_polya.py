"""Exact Laplace-Polya integrals, Eulerian numbers and inequality sweeps.

``J_n(r) = (1/pi) * int sinc(t)**n * cos(r t) dt`` for integer ``r`` is a
rational number; everything in this module works with
:class:`fractions.Fraction` and Python integers, so all comparisons are
decided exactly.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from itertools import permutations

from .errors import ConsistencyError
from .report import Report

__all__ = [
    "JCache",
    "EulerianTriangle",
    "j_explicit",
    "j_recursive",
    "j_value",
    "j_from_eulerian",
    "c_ratio",
    "eulerian",
    "eulerian_explicit",
    "eulerian_bruteforce",
    "verify_ratio_theorem",
    "verify_corollary",
    "verify_eulerian_bounds",
    "verify_ln_estimate",
    "asymptotic_j0",
    "monotonicity_report",
    "ASYMPTOTIC_ERROR_CONSTANT",
    "calibrate_asymptotic_constant",
]


def j_explicit(n: int, r: int) -> Fraction:
    """``J_n(r)`` from the alternating binomial sum (``n >= 2``)."""
    if n < 2:
        raise ValueError("j_explicit needs n >= 2")
    r = abs(r)
    if r >= n:
        return Fraction(0)
    m = n + r
    total = 0
    for i in range(m // 2 + 1):
        term = math.comb(n, i) * (m - 2 * i) ** (n - 1)
        total += -term if i & 1 else term
    return Fraction(total, 2 ** (n - 1) * math.factorial(n - 1))


# J_1 at the jump points r = +-1 is the mean of the one-sided limits; this is
# the value of the integral there and the one the recursion needs to give J_2(0) = 1.
_J1 = {0: Fraction(1), 1: Fraction(1, 2)}


class JCache:
    """Thread-safe memo of ``J_n(r)`` keyed by ``(n, |r|)``.

    Rows are filled bottom-up by the three-term recursion, so asking for
    ``J_n`` also stores every ``J_m`` with ``m < n``.
    """

    def __init__(self):
        self._rows: dict[int, list[Fraction]] = {1: [_J1[0], _J1[1]]}
        self._lock = threading.Lock()

    def __contains__(self, key):
        n, r = key
        row = self._rows.get(n)
        return row is not None and (abs(r) < len(row) or abs(r) >= n)

    def row(self, n: int) -> list[Fraction]:
        """``[J_n(0), ..., J_n(n-1)]`` (``[J_1(0), J_1(1)]`` for n = 1)."""
        if n < 1:
            raise ValueError("n must be >= 1")
        with self._lock:
            top = max(self._rows)
            for m in range(top + 1, n + 1):
                self._rows[m] = _next_row(self._rows[m - 1], m)
            return self._rows[n]

    def get(self, n: int, r: int) -> Fraction:
        r = abs(r)
        row = self.row(n)
        if n == 1:
            return row[r] if r <= 1 else Fraction(0)
        return row[r] if r < n else Fraction(0)

    def snapshot(self) -> dict[tuple[int, int], Fraction]:
        with self._lock:
            return {(n, r): v for n, row in self._rows.items() for r, v in enumerate(row)}


def _next_row(prev: list[Fraction], n: int) -> list[Fraction]:
    def p(r):
        r = abs(r)
        return prev[r] if r < len(prev) else Fraction(0)

    d = 2 * (n - 1)
    return [Fraction(n + r, d) * p(r + 1) + Fraction(n - r, d) * p(r - 1) for r in range(n)]


_DEFAULT_CACHE = JCache()


def j_recursive(n: int, r: int, cache: JCache | None = None) -> Fraction:
    """``J_n(r)`` from the recursion in ``n`` (row ``n - 1`` at ``r +- 1``), memoised in ``cache``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (cache or _DEFAULT_CACHE).get(n, r)


_value_memo: dict[tuple[int, int], Fraction] = {}
_value_lock = threading.Lock()


def j_value(n: int, r: int) -> Fraction:
    """``J_n(r)`` for any ``n >= 1``; the explicit formula for ``n >= 2``."""
    r = abs(r)
    if n == 1:
        return _J1.get(r, Fraction(0))
    key = (n, r)
    with _value_lock:
        hit = _value_memo.get(key)
    if hit is None:
        hit = j_explicit(n, r)
        with _value_lock:
            _value_memo[key] = hit
    return hit


def c_ratio(n: int, r: int) -> Fraction:
    """The decay constant ``c_{n,r}`` bounding ``J_n(r+2) / J_n(r)``."""
    den = (n + r) * (n + r + 2) * (n + r + 4)
    if den == 0:
        raise ValueError(f"c_ratio undefined at n={n}, r={r}")
    return Fraction((n - r - 2) * (n - r) * (n - r + 2), den)


# ----------------------------------------------------------------------------
# Eulerian numbers


class EulerianTriangle:
    """Rows ``A(m, 0..m+1)`` built by the recursion and checked against the
    explicit alternating sum as they are built."""

    def __init__(self):
        self._rows: list[list[int]] = [[1, 0]]
        self._lock = threading.Lock()

    def row(self, m: int) -> list[int]:
        if m < 0:
            raise ValueError("m must be >= 0")
        with self._lock:
            while len(self._rows) <= m:
                k = len(self._rows)
                prev = self._rows[-1]

                def a(l):
                    return prev[l] if 0 <= l < len(prev) else 0

                new = [0] + [(k - l + 1) * a(l - 1) + l * a(l) for l in range(1, k + 2)]
                for l, val in enumerate(new):
                    if val != eulerian_explicit(k, l):
                        raise ConsistencyError(f"Eulerian mismatch at A({k},{l})")
                self._rows.append(new)
            return self._rows[m]

    def __getitem__(self, key) -> int:
        m, l = key
        if l < 0:
            return 0
        row = self.row(m)
        return row[l] if l < len(row) else 0


_TRIANGLE = EulerianTriangle()


def eulerian_explicit(m: int, l: int) -> int:
    """``A(m, l) = sum_{i<=l} (-1)^i C(m+1, i) (l-i)^m``."""
    if m < 0 or l < 0:
        return 0
    total = 0
    for i in range(l + 1):
        term = math.comb(m + 1, i) * (l - i) ** m
        total += -term if i & 1 else term
    return total


def eulerian(m: int, l: int) -> int:
    """Eulerian number ``A(m, l)``: permutations of ``m`` items with ``l - 1`` ascents.

    Computed by the recursion; the explicit sum is checked alongside and a
    mismatch raises :class:`ConsistencyError`.
    """
    if m < 0 or l < 0:
        raise ValueError("m and l must be non-negative")
    val = _TRIANGLE[m, l]
    if val != eulerian_explicit(m, l):
        raise ConsistencyError(f"Eulerian mismatch at A({m},{l})")
    return val


def eulerian_bruteforce(m: int, l: int) -> int:
    """Count permutations of ``range(m)`` with exactly ``l - 1`` ascents."""
    if m == 0:
        return 1 if l == 0 else 0
    count = 0
    for perm in permutations(range(m)):
        asc = sum(1 for a, b in zip(perm, perm[1:]) if b > a)
        count += asc == l - 1
    return count


def j_from_eulerian(n: int, r: int) -> Fraction:
    """``J_n(r) = A(n-1, (n+r)/2) / (n-1)!`` for ``n + r`` even."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if (n + r) % 2:
        raise ValueError("n + r must be even")
    r = abs(r)
    if r > n:
        return Fraction(0)
    return Fraction(eulerian(n - 1, (n + r) // 2), math.factorial(n - 1))


# ----------------------------------------------------------------------------
# sweeps


def verify_ratio_theorem(n_max: int, keep_entries: bool = True) -> Report:
    """``J_n(r+2) <= c_{n,r} J_n(r)`` for ``4 <= n <= n_max``, ``-1 <= r <= n-2``."""
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    rep = Report("ratio-theorem", {"n": [4, n_max], "r": "[-1, n-2]"})
    equalities = []
    for n in range(4, n_max + 1):
        for r in range(-1, n - 1):
            lhs = j_value(n, r + 2)
            rhs = c_ratio(n, r) * j_value(n, r)
            rep.record({"n": n, "r": r}, lhs, rhs, lhs <= rhs, keep=keep_entries)
            if lhs == rhs:
                equalities.append([n, r])
    rep.info["equality_cases"] = equalities
    rep.info["interior_equalities"] = [[n, r] for n, r in equalities if r not in (-1, n - 2)]
    return rep


def verify_corollary(n_max: int, keep_entries: bool = True) -> Report:
    """``(n+3) J_{n+2}(0) < (n+2) J_n(0)`` for ``2 <= n <= n_max``."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    rep = Report("corollary", {"n": [2, n_max]})
    for n in range(2, n_max + 1):
        lhs = (n + 3) * j_value(n + 2, 0)
        rhs = (n + 2) * j_value(n, 0)
        rep.record({"n": n}, lhs, rhs, lhs < rhs, keep=keep_entries)
    return rep


def verify_eulerian_bounds(m_max: int, keep_entries: bool = True) -> Report:
    """The Eulerian-ratio bound, the older power bound, and their comparison.

    For ``l >= 2`` and ``2l - 1 <= m <= m_max`` checks

    * ``A(m, l-1) <= c_{m+1, m-2l+1} A(m, l)``
    * ``A(m, l-1) < ((m-l)/(m-l+2))**(m-2l+2) A(m, l)``
    * ``c_{m+1, m-2l+1} <= ((m-l)/(m-l+2))**(m-2l+2)``
    """
    if m_max < 3:
        raise ValueError("m_max must be >= 3")
    rep = Report("eulerian-bounds", {"m": [3, m_max], "l": "2 <= l <= (m+1)/2"})
    strict = 0
    for m in range(3, m_max + 1):
        for l in range(2, (m + 1) // 2 + 1):
            lo, hi = eulerian(m, l - 1), eulerian(m, l)
            c = c_ratio(m + 1, m - 2 * l + 1)
            old = Fraction(m - l, m - l + 2) ** (m - 2 * l + 2)
            params = {"m": m, "l": l}
            rep.record({**params, "check": "new"}, Fraction(lo), c * hi, lo <= c * hi, keep=keep_entries)
            rep.record({**params, "check": "old"}, Fraction(lo), old * hi, lo < old * hi, keep=keep_entries)
            rep.record({**params, "check": "compare"}, c, old, c <= old, keep=keep_entries)
            strict += c < old
    rep.info["strictly_stronger"] = strict
    return rep


def verify_ln_estimate(n_max: int, keep_entries: bool = True) -> Report:
    """``n(n-2)/(n+2)^2 < J_n(2)/J_n(0) < n(n^2-2)/(n+2)^3``.

    Asserted for even ``4 <= n <= n_max``; odd ``3 <= n <= n_max`` are
    evaluated and listed under ``info`` only.
    """
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    rep = Report("ln-estimate", {"n": [4, n_max], "asserted": "even n"})
    odd = []
    for n in range(3, n_max + 1):
        ratio = j_value(n, 2) / j_value(n, 0)
        low = Fraction(n * (n - 2), (n + 2) ** 2)
        high = Fraction(n * (n * n - 2), (n + 2) ** 3)
        ok = low < ratio < high
        if n % 2 == 0:
            rep.record({"n": n}, ratio, [low, high], ok, keep=keep_entries)
        else:
            odd.append({"n": n, "ratio": ratio, "lower": low, "upper": high, "holds": ok})
    rep.info["odd"] = odd
    return rep


# Frozen from calibrate_asymptotic_constant(): twice the largest
# n^4 * |J_n(0) - expansion| over 50 <= n <= 500 (attained at n = 50).
ASYMPTOTIC_ERROR_CONSTANT = 0.005288727107317675

_ASYM = (1.0, -3.0 / 20.0, -13.0 / 1120.0, 27.0 / 3200.0)


def asymptotic_j0(n: int, order: int = 3) -> float:
    """Large-``n`` expansion of ``J_n(0)`` truncated after ``1/n**order``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= order <= 3:
        raise ValueError("order must be in 0..3")
    series = math.fsum(c / n**k for k, c in enumerate(_ASYM[: order + 1]))
    return math.sqrt(6.0 / (math.pi * n)) * series


def _asym_error(n: int) -> float:
    return float(j_value(n, 0) - Fraction(asymptotic_j0(n, 3)))


def calibrate_asymptotic_constant(n_lo: int = 50, n_hi: int = 500) -> float:
    """``2 * max n^4 |J_n(0) - asymptotic_j0(n, 3)|`` over ``[n_lo, n_hi]``."""
    return 2.0 * max(n**4 * abs(_asym_error(n)) for n in range(n_lo, n_hi + 1))


def monotonicity_report(n_max: int, keep_entries: bool = True) -> Report:
    """``J_n(0)`` decreasing, ``n J_n(0)`` increasing and, for ``n >= 3``,
    ``n J_n(0)^2`` increasing (the square of ``sqrt(n) J_n(0)``)."""
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    rep = Report("monotonicity", {"n": [2, n_max]})
    for n in range(2, n_max):
        a, b = j_value(n, 0), j_value(n + 1, 0)
        rep.record({"n": n, "check": "J decreasing"}, b, a, b < a, keep=keep_entries)
        rep.record({"n": n, "check": "nJ increasing"}, (n + 1) * b, n * a, (n + 1) * b > n * a, keep=keep_entries)
        if n >= 3:
            rep.record(
                {"n": n, "check": "nJ^2 increasing"}, (n + 1) * b * b, n * a * a, (n + 1) * b * b > n * a * a,
                keep=keep_entries,
            )
    return rep

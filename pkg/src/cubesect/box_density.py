"""Exact density of weighted sums of uniform variables.

For ``X_i`` independent and uniform on ``[-1, 1]`` and positive weights
``v``, the density of ``sum v_i X_i`` is the inclusion-exclusion sum

    f(r) = sum_e (-1)^|e| (r + sum v - 2 sum_e v)_+^(n-1) / (2^n (n-1)! prod v)

over subsets ``e``.  With rational inputs everything below is exact; with
float inputs the compiled kernel evaluates the same sum with compensated
summation.  Section volumes of the unit cube follow from
``s(v, rho) = 2 |v| f(2 rho)``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import _backend

__all__ = [
    "WeightVector",
    "RadicalValue",
    "density",
    "cdf",
    "section_volume",
    "sigma_exact",
    "abs_moment",
    "j_oracle",
    "FLOAT_MAX_N",
]

FLOAT_MAX_N = 24


def _is_exact(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive weights, all exact (``int``/``Fraction``) or all float."""

    weights: tuple

    def __init__(self, weights):
        ws = tuple(weights)
        if not ws:
            raise ValueError("need at least one weight")
        exact = all(_is_exact(w) for w in ws)
        ws = tuple(Fraction(w) for w in ws) if exact else tuple(float(w) for w in ws)
        if any(not w > 0 for w in ws):
            raise ValueError("weights must be strictly positive (strip zeros first)")
        object.__setattr__(self, "weights", ws)

    @property
    def exact(self) -> bool:
        return isinstance(self.weights[0], Fraction)

    def __len__(self):
        return len(self.weights)

    @classmethod
    def coerce(cls, v) -> "WeightVector":
        return v if isinstance(v, cls) else cls(v)


def _signed_subset_sums(doubled):
    """Map each subset sum of ``doubled`` to the signed count sum (-1)^|e|."""
    acc = Counter({Fraction(0): 1})
    for w in doubled:
        nxt = Counter(acc)
        for s, c in acc.items():
            nxt[s + w] -= c
        acc = Counter({k: c for k, c in nxt.items() if c})
    return acc


def _exact_power_sum(ws, x, power):
    total = Fraction(0)
    for s, c in _signed_subset_sums([2 * w for w in ws]).items():
        d = x - s
        if d > 0:
            total += c * d**power
    return total


def density(v, r):
    """Density of ``sum v_i X_i`` at ``r``.

    Exact when ``v`` and ``r`` are rational, a float otherwise.  For a single
    weight the density is ``1/(2 v_1)`` on the open interval and undefined at
    ``r = +-v_1``.
    """
    v = WeightVector.coerce(v)
    exact = v.exact and _is_exact(r)
    ws = v.weights if exact else tuple(float(w) for w in v.weights)
    r = Fraction(r) if exact else abs(float(r))
    n = len(ws)
    total = sum(ws) if exact else math.fsum(ws)
    if n == 1:
        if abs(r) == ws[0]:
            raise ValueError("single-weight density is undefined at r = +-v_1")
        return (1 / (2 * ws[0])) if abs(r) < ws[0] else (Fraction(0) if exact else 0.0)
    if abs(r) >= total:
        return Fraction(0) if exact else 0.0
    # the density is even; evaluating at -|r| keeps only the subsets below
    # the near edge and avoids cancellation in float mode
    if exact:
        num = _exact_power_sum(ws, total - abs(r), n - 1)
        return num / (2**n * math.factorial(n - 1) * math.prod(ws))
    if n > FLOAT_MAX_N:
        raise ValueError(f"float density limited to n <= {FLOAT_MAX_N}; use sinc_quad beyond")
    arr = np.array(ws, dtype=np.float64)
    num = _backend.kernels.signed_power_sum(arr, total - r, n - 1)
    return max(num, 0.0) / (2.0**n * math.factorial(n - 1) * math.prod(ws))


def cdf(v, r):
    """``P(sum v_i X_i <= r)``, the antiderivative of :func:`density`."""
    v = WeightVector.coerce(v)
    exact = v.exact and _is_exact(r)
    ws = v.weights if exact else tuple(float(w) for w in v.weights)
    r = Fraction(r) if exact else float(r)
    n = len(ws)
    total = sum(ws)
    if r <= -total:
        return Fraction(0) if exact else 0.0
    if r >= total:
        return Fraction(1) if exact else 1.0
    if r > 0:
        return 1 - cdf(ws, -r)
    den = 2**n * math.factorial(n) * math.prod(ws)
    if exact:
        return _exact_power_sum(ws, r + total, n) / den
    arr = np.array(ws, dtype=np.float64)
    return _backend.kernels.signed_power_sum(arr, r + total, n) / den


def _square_part(n: int) -> tuple[int, int]:
    """``(s, f)`` with ``n = s**2 * f`` and ``f`` square-free.

    Trial division up to the cube root suffices: what remains then has at
    most two prime factors, and it is a square only if they coincide.
    """
    if n == 0:
        return 0, 0
    s, f = 1, 1
    p = 2
    while p * p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1 if p == 2 else 2
    q = math.isqrt(n)
    if q * q == n:
        return s * q, f
    return s, f * n


@dataclass(frozen=True)
class RadicalValue:
    """The exact real number ``coeff * sqrt(radicand)``.

    Stored canonically: the radicand is a square-free positive integer (or 0
    together with a zero coefficient), so equal numbers compare equal.
    """

    coeff: Fraction
    radicand: Fraction

    def __init__(self, coeff, radicand=1):
        coeff, radicand = Fraction(coeff), Fraction(radicand)
        if radicand < 0:
            raise ValueError("radicand must be non-negative")
        if coeff == 0 or radicand == 0:
            coeff, radicand = Fraction(0), Fraction(0)
        else:
            # sqrt(p/q) = sqrt(p q) / q
            s, f = _square_part(radicand.numerator * radicand.denominator)
            coeff = coeff * Fraction(s, radicand.denominator)
            radicand = Fraction(f)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "radicand", radicand)

    def __float__(self):
        return float(self.coeff) * math.sqrt(self.radicand)

    def __mul__(self, other):
        if isinstance(other, RadicalValue):
            return RadicalValue(self.coeff * other.coeff, self.radicand * other.radicand)
        if _is_exact(other):
            return RadicalValue(self.coeff * other, self.radicand)
        return NotImplemented

    __rmul__ = __mul__

    def square(self) -> Fraction:
        return self.coeff**2 * self.radicand

    def to_dict(self):
        return {"coeff": self.coeff, "radicand": self.radicand}

    def __str__(self):
        if self.radicand in (0, 1):
            return str(self.coeff)
        return f"{self.coeff}*sqrt({self.radicand})"


def _nonzero(v):
    ws = [abs(w) if _is_exact(w) else abs(float(w)) for w in v]
    kept = [w for w in ws if w != 0]
    if not kept:
        raise ValueError("v must be nonzero")
    return kept


def section_volume(v, rho):
    """Volume of ``{q in [-1/2, 1/2]^n : <q, v> = rho}``.

    Zero weights are dropped and signs ignored (neither changes the section).
    Exact inputs give a :class:`RadicalValue`, float inputs a float.
    """
    ws = _nonzero(v)
    wv = WeightVector(ws)
    f = density(wv, 2 * (Fraction(rho) if wv.exact and _is_exact(rho) else float(rho)))
    if isinstance(f, Fraction):
        return RadicalValue(2 * f, sum(w * w for w in wv.weights))
    return 2.0 * f * math.sqrt(math.fsum(w * w for w in wv.weights))


def sigma_exact(v):
    """Central section volume ``sigma(v)`` of the unit cube orthogonal to ``v``."""
    return section_volume(v, Fraction(0) if all(_is_exact(w) for w in v) else 0.0)


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_shift_power(shift, power):
    """Coefficients of ``(y - shift)**power`` in ascending order."""
    return [Fraction(math.comb(power, k)) * (-shift) ** (power - k) for k in range(power + 1)]


def _poly_integral(p, lo, hi):
    return sum(c * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1) for k, c in enumerate(p))


def abs_moment(m: int, c) -> Fraction:
    """``E|c - S_m|`` for ``S_m`` a sum of ``m`` uniforms on ``[-1/2, 1/2]``.

    Integrates ``|c - x|`` against the piecewise-polynomial density of
    ``S_m`` one unit interval at a time, splitting the interval at ``c``.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    c = Fraction(c)
    if m == 0:
        return abs(c)
    # work with U = S_m + m/2, supported on [0, m]; c moves to cc
    cc = c + Fraction(m, 2)
    total = Fraction(0)
    fact = math.factorial(m - 1)
    piece = [Fraction(0)] * m
    for k in range(m):
        term = _poly_shift_power(k, m - 1)
        sign = -1 if k & 1 else 1
        coef = Fraction(sign * math.comb(m, k), fact)
        piece = [a + coef * b for a, b in zip(piece, term)]
        lin = [cc, Fraction(-1)]  # cc - y
        q = _poly_mul(lin, piece)
        lo, hi = Fraction(k), Fraction(k + 1)
        if cc <= lo:
            total -= _poly_integral(q, lo, hi)
        elif cc >= hi:
            total += _poly_integral(q, lo, hi)
        else:
            total += _poly_integral(q, lo, cc) - _poly_integral(q, cc, hi)
    # outside [0, m] the density vanishes
    return total


def j_oracle(n: int, r: int) -> Fraction:
    """``J_n(r)`` as twice the density of a sum of ``n`` uniforms on ``[-1, 1]``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return 2 * density(WeightVector([1] * n), Fraction(r))


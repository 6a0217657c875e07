"""Reference computations that share no code with the package.

* ``ConvolutionDensity`` builds the density of ``sum v_i X_i`` by repeated
  convolution of piecewise polynomials (``g(x) = (F(x+v) - F(x-v)) / 2v``).
* ``irwin_hall_abs_moment`` uses the Irwin-Hall CDF instead of integrating
  the density piece by piece.
* ``eulerian_by_permutations`` counts ascents directly.
"""

from __future__ import annotations

import bisect
import math
from fractions import Fraction
from itertools import permutations


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pscale(a, c):
    return [c * x for x in a]


def _pcompose_shift(a, s):
    """Coefficients of p(x + s)."""
    out = [Fraction(0)] * len(a)
    for k, c in enumerate(a):
        for j in range(k + 1):
            out[j] += c * math.comb(k, j) * s ** (k - j)
    return out


def _peval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _pint(a):
    return [Fraction(0)] + [c / (k + 1) for k, c in enumerate(a)]


class PiecewisePoly:
    """Polynomials on ``(-inf, k0), [k0, k1), ..., [km, inf)``."""

    def __init__(self, knots, polys):
        assert len(polys) == len(knots) + 1
        self.knots = list(knots)
        self.polys = [list(p) for p in polys]

    def piece(self, x):
        return self.polys[bisect.bisect_right(self.knots, x)]

    def __call__(self, x):
        return _peval(self.piece(x), x)

    def antiderivative(self):
        """Continuous antiderivative vanishing at -inf (first piece is 0)."""
        out = [[Fraction(0)]]
        for i, k in enumerate(self.knots):
            p = _pint(self.polys[i + 1])
            # match the running value at the knot
            left = _peval(out[-1], k)
            p[0] += left - _peval(p, k)
            out.append(p)
        return PiecewisePoly(self.knots, out)

    def shifted(self, s):
        """x -> f(x + s)."""
        return PiecewisePoly([k - s for k in self.knots], [_pcompose_shift(p, s) for p in self.polys])

    def combine(self, other, ca, cb):
        knots = sorted(set(self.knots) | set(other.knots))
        probes = [knots[0] - 1] + [
            (knots[i] + knots[i + 1]) / 2 for i in range(len(knots) - 1)
        ] + [knots[-1] + 1]
        polys = [_padd(_pscale(self.piece(x), ca), _pscale(other.piece(x), cb)) for x in probes]
        return PiecewisePoly(knots, polys)


def convolution_density(weights):
    """Exact piecewise-polynomial density of ``sum w_i X_i``, ``X_i ~ U[-1, 1]``."""
    ws = [Fraction(w) for w in weights]
    w0 = ws[0]
    f = PiecewisePoly([-w0, w0], [[Fraction(0)], [1 / (2 * w0)], [Fraction(0)]])
    for w in ws[1:]:
        F = f.antiderivative()
        f = F.shifted(w).combine(F.shifted(-w), 1 / (2 * w), -1 / (2 * w))
    return f


def irwin_hall_abs_moment(m: int, c) -> Fraction:
    """``E|c - S_m|`` for ``S_m`` a sum of ``m`` uniforms on ``[-1/2, 1/2]``.

    With ``U = S_m + m/2`` Irwin-Hall and ``c' = c + m/2``:
    ``E|c' - U| = 2 E(c' - U)_+ - (c' - m/2)`` and
    ``E(c' - U)_+ = sum_k (-1)^k C(m,k) (c' - k)_+^(m+1) / (m+1)!``.
    """
    c = Fraction(c)
    if m == 0:
        return abs(c)
    cp = c + Fraction(m, 2)
    pos = sum(
        (Fraction((-1) ** k * math.comb(m, k)) * (cp - k) ** (m + 1) for k in range(m + 1) if cp - k > 0),
        Fraction(0),
    ) / math.factorial(m + 1)
    return 2 * pos - c


def eulerian_by_permutations(m: int, l: int) -> int:
    if m == 0:
        return int(l == 0)
    return sum(
        1 for p in permutations(range(m)) if sum(b > a for a, b in zip(p, p[1:])) == l - 1
    )


def j_via_permutation_ascents(n: int, r: int) -> Fraction:
    """``J_n(r)`` from the Eulerian link only (``n + r`` even): A(n-1, (n+r)/2) / (n-1)!."""
    r = abs(r)
    if r >= n:
        return Fraction(0)
    return Fraction(eulerian_by_permutations(n - 1, (n + r) // 2), math.factorial(n - 1))

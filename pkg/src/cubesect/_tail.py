"""Closed-form tails of sinc-product integrals.

Every integrand handled by :mod:`cubesect.sinc_quad` is a finite product of
factors ``sinc(vt)``, ``cos(vt)`` and a few derivatives of them.  Each factor
is a short sum of monomials ``c * t**(-p) * exp(i*w*t)``, so the whole
integrand is one too, and

    int_T^inf t**(-p) exp(i*w*t) dt = T**(1-p) * E_p(-i*w*T)

with ``E_p`` the generalised exponential integral.  This gives the tail
beyond the truncation point exactly (up to rounding) instead of a bound.
"""

from __future__ import annotations

import math

import numpy as np

EULER_GAMMA = float(np.euler_gamma)
_EPS = 1e-16
_SERIES_RADIUS = 1.5
_SERIES_TERMS = 60
_CF_MAXIT = 20000

# factor kinds; the numeric kernels use the same codes
SINC = 0
COS = 1
DSINC = 2  # (cos(vt) - sinc(vt)) / v  ==  d/dv sinc(vt)
BETA = 3  # (2/v^2)(sinc(vt) - cos(vt)) - t^2 sinc(vt) + sinc(vt)

# (power, sign of frequency, coefficient as function of v) per kind
_MONOMIALS = {
    SINC: ((1, +1, lambda v: 1 / (2j * v)), (1, -1, lambda v: -1 / (2j * v))),
    COS: ((0, +1, lambda v: 0.5), (0, -1, lambda v: 0.5)),
    DSINC: (
        (0, +1, lambda v: 0.5 / v),
        (0, -1, lambda v: 0.5 / v),
        (1, +1, lambda v: -1 / (2j * v * v)),
        (1, -1, lambda v: 1 / (2j * v * v)),
    ),
    BETA: (
        (1, +1, lambda v: (2 / v**2 + 1) / (2j * v)),
        (1, -1, lambda v: -(2 / v**2 + 1) / (2j * v)),
        (0, +1, lambda v: -1 / v**2),
        (0, -1, lambda v: -1 / v**2),
        (-1, +1, lambda v: -1 / (2j * v)),
        (-1, -1, lambda v: 1 / (2j * v)),
    ),
}


def expint_complex(p, z):
    """Vectorised ``E_p(z)`` for integer ``p >= 1`` and complex ``z != 0``
    with ``Re z >= 0``.

    Power series inside ``|z| < 1.5``, modified-Lentz continued fraction
    outside.  The principal branch of the logarithm is used.
    """
    p = np.asarray(p, dtype=np.int64)
    z = np.asarray(z, dtype=np.complex128)
    p, z = np.broadcast_arrays(p, z)
    if np.any(p < 1):
        raise ValueError("E_p requires p >= 1")
    if np.any(z == 0):
        raise ValueError("E_p(0) must be handled by the caller")
    out = np.empty(z.shape, dtype=np.complex128)
    small = np.abs(z) < _SERIES_RADIUS
    if small.any():
        out[small] = _expint_series(p[small], z[small])
    if (~small).any():
        out[~small] = _expint_cf(p[~small], z[~small])
    return out


def _expint_series(p, z):
    nm1 = p - 1
    logz = np.log(z)
    ans = np.where(nm1 == 0, -logz - EULER_GAMMA, 1.0 / np.maximum(nm1, 1)).astype(np.complex128)
    # digamma(p) for integer p
    harmonic = np.array([math.fsum(1.0 / k for k in range(1, m + 1)) for m in range(int(nm1.max()) + 1)])
    psi = -EULER_GAMMA + harmonic[nm1]
    fact = np.ones_like(z)
    for i in range(1, _SERIES_TERMS + 1):
        fact = fact * (-z / i)
        hit = nm1 == i
        denom = np.where(hit, 1, i - nm1)
        delta = np.where(hit, fact * (psi - logz), -fact / denom)
        ans = ans + delta
    return ans


def _expint_cf(p, z):
    fpmin = 1e-300
    pf = p.astype(np.float64)
    b = z + pf
    c = np.full(z.shape, 1.0 / fpmin, dtype=np.complex128)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(z.shape, dtype=bool)
    for i in range(1, _CF_MAXIT + 1):
        an = -i * (pf - 1 + i)
        b = b + 2
        d = np.where(active, 1.0 / (an * d + b), d)
        c = np.where(active, b + an / c, c)
        dl = np.where(active, c * d, 1.0)
        h = h * dl
        active &= np.abs(dl - 1) >= _EPS
        if not active.any():
            break
    else:
        raise ArithmeticError("continued fraction for E_p did not converge")
    return h * np.exp(-z)


def expand(kinds, weights):
    """Expand a product of factors into monomials.

    Returns arrays ``(power, freq, coef)`` such that the product equals
    ``sum coef * t**(-power) * exp(1j * freq * t)``.  Terms with equal power
    and (numerically) equal frequency are merged.
    """
    power = np.zeros(1, dtype=np.int64)
    freq = np.zeros(1)
    coef = np.ones(1, dtype=np.complex128)
    scale = float(sum(abs(w) for w in weights)) or 1.0
    for kind, v in zip(kinds, weights):
        mono = _MONOMIALS[int(kind)]
        fp = np.array([m[0] for m in mono], dtype=np.int64)
        fs = np.array([m[1] for m in mono], dtype=np.float64) * v
        fc = np.array([m[2](v) for m in mono], dtype=np.complex128)
        power = (power[:, None] + fp[None, :]).ravel()
        freq = (freq[:, None] + fs[None, :]).ravel()
        coef = (coef[:, None] * fc[None, :]).ravel()
        power, freq, coef = _merge(power, freq, coef, scale)
    return power, freq, coef


def _merge(power, freq, coef, scale):
    # group on a relative grid; frequencies that should cancel become exactly 0
    key = np.round(freq / scale * 2.0**40).astype(np.int64)
    freq = np.where(key == 0, 0.0, freq)
    pairs = np.stack([power, key], axis=1)
    uniq, inverse = np.unique(pairs, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    merged = np.zeros(len(uniq), dtype=np.complex128)
    np.add.at(merged, inverse, coef)
    ufreq = np.zeros(len(uniq))
    ufreq[inverse] = freq
    keep = merged != 0
    return uniq[keep, 0], ufreq[keep], merged[keep]


def tail_integral(kinds, weights, T):
    """``int_T^inf`` of the product integrand, via the monomial expansion.

    Returns ``(value, rounding_bound)``.
    """
    power, freq, coef = expand(kinds, weights)
    zero = freq == 0
    vals = np.zeros(len(power))
    if zero.any():
        pz = power[zero]
        cz = coef[zero].real
        bad = (pz <= 1) & (np.abs(cz) > 1e-9 * (np.abs(coef).max()))
        if bad.any():
            raise ValueError("integrand is not integrable at infinity")
        ok = pz >= 2
        vz = np.zeros(len(pz))
        vz[ok] = cz[ok] * T ** (1.0 - pz[ok]) / (pz[ok] - 1)
        vals[zero] = vz
    nz = ~zero
    if nz.any():
        pn = power[nz]
        if np.any(pn < 1):
            raise ValueError("integrand is not integrable at infinity")
        e = expint_complex(pn, -1j * freq[nz] * T)
        vals[nz] = (coef[nz] * T ** (1.0 - pn) * e).real
    value = math.fsum(vals.tolist())
    bound = 64 * _EPS * float(np.abs(vals).sum()) + 1e-300
    return value, bound

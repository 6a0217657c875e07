"""Pure-Python (numpy) fallback for the hot kernels in ``_ckernels.pyx``.

Both modules expose the same functions with the same argument order; see
:mod:`cubesect._backend` for how one is picked at import time.
"""

import math

import numpy as np

SINC, COS, DSINC, BETA = 0, 1, 2, 3

_CHUNK = 2048


def _sinc(x):
    out = np.empty_like(x)
    small = np.abs(x) < 1e-4
    xs = x[small]
    out[small] = 1.0 - xs * xs / 6.0 + xs**4 / 120.0
    xl = x[~small]
    out[~small] = np.sin(xl) / xl
    return out


def _cos_minus_sinc(x):
    # cos(x) - sin(x)/x, series near 0 to dodge cancellation
    out = np.empty_like(x)
    small = np.abs(x) < 0.1
    x2 = x[small] ** 2
    out[small] = x2 * (-1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 / 45360.0)))
    xl = x[~small]
    out[~small] = np.cos(xl) - np.sin(xl) / xl
    return out


def _factor(kind, v, t):
    x = v * t
    if kind == SINC:
        return _sinc(x)
    if kind == COS:
        return np.cos(x)
    if kind == DSINC:
        return _cos_minus_sinc(x) / v
    if kind == BETA:
        s = _sinc(x)
        return -2.0 * _cos_minus_sinc(x) / (v * v) - t * t * s + s
    raise ValueError(f"unknown factor kind {kind}")


def group_factors(kinds, weights):
    """Merge repeated ``(kind, weight)`` pairs into ``(kind, weight, multiplicity)``."""
    counts = {}
    for kind, v in zip(kinds, weights):
        key = (int(kind), float(v))
        if not 0 <= key[0] <= 3:
            raise ValueError(f"unknown factor kind {key[0]}")
        counts[key] = counts.get(key, 0) + 1
    return [(k, v, m) for (k, v), m in counts.items()]


def panel_sums(lo, hi, kinds, weights, nodes, wk, wg):
    """Kronrod, Gauss and absolute-Kronrod sums of the product integrand on
    each panel ``[lo[i], hi[i]]``."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    npan = lo.shape[0]
    groups = group_factors(kinds, weights)
    K = np.empty(npan)
    G = np.empty(npan)
    A = np.empty(npan)
    for s in range(0, npan, _CHUNK):
        c = 0.5 * (lo[s : s + _CHUNK] + hi[s : s + _CHUNK])
        h = 0.5 * (hi[s : s + _CHUNK] - lo[s : s + _CHUNK])
        t = c[:, None] + h[:, None] * nodes[None, :]
        f = np.ones_like(t)
        for kind, v, mult in groups:
            g = _factor(kind, v, t)
            f *= g if mult == 1 else g**mult
        K[s : s + _CHUNK] = (f @ wk) * h
        G[s : s + _CHUNK] = (f @ wg) * h
        A[s : s + _CHUNK] = (np.abs(f) @ wk) * h
    return K, G, A


def signed_power_sum(weights, x, power):
    """``sum over subsets e of (-1)^|e| * max(x - 2*sum_e w, 0)**power``.

    Subset sums are assembled from a low and a high half so each one carries
    at most ``len(weights)`` roundings; the total is correctly rounded.
    """
    w = np.asarray(weights, dtype=np.float64)
    n = w.shape[0]
    nlo = n // 2
    lo_sums, lo_sign = _subset_sums(2.0 * w[:nlo])
    hi_sums, hi_sign = _subset_sums(2.0 * w[nlo:])
    parts = []
    for hs, sg in zip(hi_sums.tolist(), hi_sign.tolist()):
        base = x - hs
        d = base - lo_sums
        d = np.where(d > 0.0, d, 0.0)
        terms = (d**power) * (lo_sign * sg)
        parts.append(math.fsum(terms.tolist()))
    return math.fsum(parts)


def _subset_sums(w):
    sums = np.zeros(1)
    sign = np.ones(1)
    for wi in w:
        sums = np.concatenate([sums, sums + wi])
        sign = np.concatenate([sign, -sign])
    return sums, sign

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Mirrors ``_pykernels.py`` function for function."""

import numpy as np

from ._pykernels import group_factors

from libc.math cimport sin, cos, fabs


cdef enum:
    SINC = 0
    COS = 1
    DSINC = 2
    BETA = 3


cdef inline double _sinc(double x) nogil:
    if fabs(x) < 1e-4:
        return 1.0 - x * x / 6.0 + x * x * x * x / 120.0
    return sin(x) / x


cdef inline double _cos_minus_sinc(double x) nogil:
    cdef double x2
    if fabs(x) < 0.1:
        x2 = x * x
        return x2 * (-1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 / 45360.0)))
    return cos(x) - sin(x) / x


cdef inline double _factor(int kind, double v, double t) nogil:
    cdef double x = v * t
    cdef double s
    if kind == SINC:
        return _sinc(x)
    elif kind == COS:
        return cos(x)
    elif kind == DSINC:
        return _cos_minus_sinc(x) / v
    else:
        s = _sinc(x)
        return -2.0 * _cos_minus_sinc(x) / (v * v) - t * t * s + s


cdef double _ipow(double x, int p) nogil:
    cdef double r = 1.0
    while p > 0:
        if p & 1:
            r *= x
        x *= x
        p >>= 1
    return r


def panel_sums(const double[::1] lo, const double[::1] hi,
               const int[::1] kinds, const double[::1] weights,
               const double[::1] nodes, const double[::1] wk, const double[::1] wg):
    cdef Py_ssize_t npan = lo.shape[0]
    cdef Py_ssize_t nn = nodes.shape[0]
    groups = group_factors(kinds, weights)
    cdef Py_ssize_t nf = len(groups)
    gk_arr = np.array([g[0] for g in groups], dtype=np.intc)
    gv_arr = np.array([g[1] for g in groups], dtype=np.float64)
    gm_arr = np.array([g[2] for g in groups], dtype=np.intc)
    cdef int[::1] gk = gk_arr
    cdef double[::1] gv = gv_arr
    cdef int[::1] gm = gm_arr
    K_arr = np.empty(npan)
    G_arr = np.empty(npan)
    A_arr = np.empty(npan)
    cdef double[::1] K = K_arr
    cdef double[::1] G = G_arr
    cdef double[::1] A = A_arr
    cdef Py_ssize_t i, j, m
    cdef double c, h, t, f, sk, sg, sa
    with nogil:
        for i in range(npan):
            c = 0.5 * (lo[i] + hi[i])
            h = 0.5 * (hi[i] - lo[i])
            sk = 0.0
            sg = 0.0
            sa = 0.0
            for j in range(nn):
                t = c + h * nodes[j]
                f = 1.0
                for m in range(nf):
                    f = f * _ipow(_factor(gk[m], gv[m], t), gm[m])
                sk = sk + wk[j] * f
                sg = sg + wg[j] * f
                sa = sa + wk[j] * fabs(f)
            K[i] = sk * h
            G[i] = sg * h
            A[i] = sa * h
    return K_arr, G_arr, A_arr


def signed_power_sum(const double[::1] weights, double x, int power):
    cdef Py_ssize_t n = weights.shape[0]
    cdef Py_ssize_t nlo = n // 2
    cdef Py_ssize_t nhi = n - nlo
    lo_py = _subset_sums(np.asarray(weights[:nlo]) * 2.0)
    hi_py = _subset_sums(np.asarray(weights[nlo:]) * 2.0)
    cdef double[::1] lo_s = lo_py[0]
    cdef double[::1] lo_g = lo_py[1]
    cdef double[::1] hi_s = hi_py[0]
    cdef double[::1] hi_g = hi_py[1]
    cdef Py_ssize_t i, j
    cdef double total = 0.0, comp = 0.0, term, d, base, tmp
    with nogil:
        for i in range(hi_s.shape[0]):
            base = x - hi_s[i]
            for j in range(lo_s.shape[0]):
                d = base - lo_s[j]
                if d <= 0.0:
                    continue
                term = _ipow(d, power) * lo_g[j] * hi_g[i]
                # Neumaier compensated summation
                tmp = total + term
                if fabs(total) >= fabs(term):
                    comp += (total - tmp) + term
                else:
                    comp += (term - tmp) + total
                total = tmp
    return total + comp


def _subset_sums(w):
    sums = np.zeros(1)
    sign = np.ones(1)
    for wi in w:
        sums = np.concatenate([sums, sums + wi])
        sign = np.concatenate([sign, -sign])
    return np.ascontiguousarray(sums), np.ascontiguousarray(sign)

"""Adaptive quadrature for sinc-product integrals.

All integrals here have the form

    (1/pi) * int_{-inf}^{inf} prod_i g_i(v_i t) dt

with each ``g_i`` one of ``sinc``, ``cos``, the first ``v``-derivative of
``sinc(vt)`` or the diagonal Hessian modifier.  The integrand is even, so we
integrate over ``[0, T]`` with Gauss-Kronrod panels (the compiled kernel does
the work) and add the tail over ``[T, inf)`` either as a certified envelope
bound or in closed form (see :mod:`cubesect._tail`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend, _gk
from ._tail import BETA, COS, DSINC, SINC, tail_integral
from .errors import NonConvergent

__all__ = [
    "QuadratureConfig",
    "DEFAULT",
    "SincIntegrand",
    "QuadResult",
    "integrate",
    "integrate_segment",
    "certified_truncation",
    "sinc_product_integral",
    "sigma_num",
    "parallel_section_num",
    "sigma_grad",
    "beta_entry",
    "gamma_entry",
    "SINC",
    "COS",
    "DSINC",
    "BETA",
]

_EPS = np.finfo(float).eps
_NEGLIGIBLE = 1e-8  # v*T below this: factor treated as sinc(0) = 1
_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the sinc-product quadrature.

    ``truncation_policy`` is ``"analytic"`` (closed-form tail, the default) or
    ``"envelope"`` (truncate where the envelope bound on the tail drops below
    half the tolerance; needs decay of order ``t**-2`` or faster).
    """

    abs_tol: float = 1e-12
    max_subdivisions: int = 2**15
    truncation_policy: str = "analytic"
    backend: str | None = None

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 16:
            raise ValueError("max_subdivisions must be at least 16")
        if self.truncation_policy not in ("analytic", "envelope"):
            raise ValueError(f"unknown truncation policy {self.truncation_policy!r}")

    @property
    def kernels(self):
        return _backend.kernels if self.backend is None else _backend.load(self.backend)


DEFAULT = QuadratureConfig()


@dataclass(frozen=True)
class SincIntegrand:
    """Product of factors ``(kind, weight)``; kinds are SINC, COS, DSINC, BETA."""

    factors: tuple

    @classmethod
    def product(cls, weights, r=0.0, modifiers=None):
        """``prod sinc(v_i t) * cos(r t)``, with ``modifiers`` mapping an index
        to a replacement kind (DSINC or BETA) for that factor."""
        modifiers = modifiers or {}
        fac = []
        for i, w in enumerate(weights):
            w = abs(float(w))
            kind = modifiers.get(i, SINC)
            if kind != SINC and w == 0:
                raise ValueError(f"modified factor {i} needs a nonzero weight")
            fac.append((kind, w))
        if r:
            fac.append((COS, abs(float(r))))
        return cls(tuple(fac))

    @property
    def decay(self) -> int:
        """Exponent p with |integrand| = O(t**-p)."""
        return sum(1 for k, w in self.factors if k == SINC and w > 0) - sum(1 for k, _ in self.factors if k == BETA)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    truncation: float
    panels: int
    tail: float
    tail_mode: str


def _envelope(factors, T):
    """(K, p) with |integrand(t)| <= K t**-p for t >= T."""
    K = 1.0
    p = 0
    for kind, v in factors:
        if kind == SINC:
            K /= v
            p += 1
        elif kind == DSINC:
            K *= (1.0 + 1.0 / (v * T)) / v
        elif kind == BETA:
            K *= (2.0 / v**2) * (1.0 / (v * T * T) + 1.0 / T) + 1.0 / v + 1.0 / (v * T * T)
            p -= 1
    return K, p


def _tail_bound(factors, T):
    K, p = _envelope(factors, T)
    if p < 2:
        return math.inf
    return K * T ** (1.0 - p) / (p - 1)


def _panel_error(K, G, A):
    diff = np.abs(K - G)
    err = diff.copy()
    pos = A > 0
    err[pos] = A[pos] * np.minimum(1.0, (200.0 * diff[pos] / A[pos]) ** 1.5)
    return np.maximum(err, 50 * _EPS * A)


def _prepare(integrand):
    factors = [(k, w) for k, w in integrand.factors if not (k in (SINC, COS) and w == 0)]
    scales = [w for k, w in factors if k != COS]
    if not scales:
        raise ValueError("integrand has no decaying factor")
    T = 8 * math.pi / min(scales)
    factors = [(k, w) for k, w in factors if not (k == SINC and w * T < _NEGLIGIBLE)]
    p = sum(1 for k, _ in factors if k == SINC) - sum(1 for k, _ in factors if k == BETA)
    if p < 1:
        raise ValueError(f"integrand decays like t**-{p}; integral does not converge")
    return factors, T, p


def _head(factors, T, tol, cfg, npan=None):
    """Adaptive GK21 integral over [0, T] to absolute error ``tol``.

    Returns (value, error estimate, panel count)."""
    omega = sum(w for _, w in factors)
    budget = cfg.max_subdivisions
    if npan is None:
        npan = max(8, math.ceil(T * omega / math.pi))
    kinds = np.array([k for k, _ in factors], dtype=np.int32)
    weights = np.array([w for _, w in factors], dtype=np.float64)
    kern = cfg.kernels
    edges = np.linspace(0.0, T, npan + 1)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    Ks, Gs, As = kern.panel_sums(lo, hi, kinds, weights, _gk.NODES, _gk.KRONROD_WEIGHTS, _gk.GAUSS_WEIGHTS)
    err = _panel_error(Ks, Gs, As)
    while err.sum() > tol:
        if len(lo) >= budget:
            raise NonConvergent(f"quadrature error {err.sum():.3g} after {len(lo)} panels")
        # split the worst panels until what is left meets half the target
        order = np.argsort(-err, kind="stable")
        excess = np.cumsum(err[order])
        nsplit = int(np.searchsorted(excess, err.sum() - 0.5 * tol)) + 1
        nsplit = min(nsplit, budget - len(lo))
        split = np.zeros(len(lo), dtype=bool)
        split[order[:nsplit]] = True
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[~split], lo[split], mid])
        new_hi = np.concatenate([hi[~split], mid, hi[split]])
        srt = np.argsort(new_lo, kind="stable")
        lo, hi = new_lo[srt], new_hi[srt]
        Ks, Gs, As = kern.panel_sums(lo, hi, kinds, weights, _gk.NODES, _gk.KRONROD_WEIGHTS, _gk.GAUSS_WEIGHTS)
        err = _panel_error(Ks, Gs, As)
    # fsum over panels in position order: independent of how they were split
    return math.fsum(Ks.tolist()), float(err.sum()), len(lo)


def integrate_segment(integrand: SincIntegrand, T: float, cfg: QuadratureConfig = DEFAULT):
    """``(1/pi) * int_{-T}^{T}`` of the integrand with no tail: (value, error)."""
    factors, _, _ = _prepare(integrand)
    scale = 2.0 / math.pi
    val, err, _ = _head(factors, T, cfg.abs_tol / scale / 2, cfg)
    return scale * val, scale * err


def integrate(integrand: SincIntegrand, cfg: QuadratureConfig = DEFAULT) -> QuadResult:
    """``(1/pi) * int_{-inf}^{inf}`` of the integrand, to within ``cfg.abs_tol``."""
    factors, T, p = _prepare(integrand)
    omega = sum(w for _, w in factors)
    budget = cfg.max_subdivisions
    # the integral over [0, inf) carries weight 2/pi in the result
    scale = 2.0 / math.pi
    tol = cfg.abs_tol / scale

    if cfg.truncation_policy == "envelope":
        if p < 2:
            raise ValueError("envelope truncation needs decay t**-2 or faster")
        T = certified_truncation(integrand, cfg)
    npan = max(8, math.ceil(T * omega / math.pi))
    if npan > budget // 2:
        if cfg.truncation_policy == "envelope":
            raise NonConvergent(f"envelope truncation at T={T:.3g} needs {npan} panels (budget {budget})")
        npan = budget // 4
        T = npan * math.pi / omega

    head, head_err, panels = _head(factors, T, tol / 2, cfg, npan)
    bound = _tail_bound(factors, T)
    if cfg.truncation_policy == "envelope" or bound <= tol / 8:
        tail, tail_err, mode = 0.0, bound, "envelope"
    else:
        kinds = np.array([k for k, _ in factors], dtype=np.int32)
        weights = np.array([w for _, w in factors], dtype=np.float64)
        tail, tail_err = tail_integral(kinds, weights, T)
        mode = "analytic"
    return QuadResult(
        value=scale * (head + tail),
        error=scale * (head_err + tail_err),
        truncation=T,
        panels=panels,
        tail=scale * tail,
        tail_mode=mode,
    )


def certified_truncation(integrand: SincIntegrand, cfg: QuadratureConfig = DEFAULT) -> float:
    """Smallest ``T`` (at least the default) whose envelope tail bound is below
    a quarter of ``cfg.abs_tol``."""
    factors, T, p = _prepare(integrand)
    if p < 2:
        raise ValueError("envelope truncation needs decay t**-2 or faster")
    tol = cfg.abs_tol * math.pi / 2
    K0, _ = _envelope(factors, T)
    # the envelope constant only shrinks as T grows, so K0 keeps the bound valid
    return max(T, (K0 / ((p - 1) * tol / 4)) ** (1.0 / (p - 1)))


def _positive(v):
    return [abs(float(x)) for x in v if float(x) != 0.0]


def sinc_product_integral(v, r=0.0, cfg: QuadratureConfig = DEFAULT) -> float:
    """``(1/pi) * int prod_i sinc(v_i t) * cos(r t) dt``.

    Equals twice the density of ``sum v_i X_i`` at ``r`` for ``X_i`` uniform
    on ``[-1, 1]``.  A single nonzero weight is handled in closed form.
    """
    w = _positive(v)
    r = abs(float(r))
    if not w:
        raise ValueError("need at least one nonzero weight")
    if len(w) == 1:
        if r < w[0]:
            return 1.0 / w[0]
        if r == w[0]:
            return 0.5 / w[0]
        return 0.0
    if r >= sum(w):
        # outside the support of the density; the integral vanishes exactly
        return 0.0
    return integrate(SincIntegrand.product(w, r), cfg).value


def _norm(v):
    return math.sqrt(math.fsum(float(x) ** 2 for x in v))


def sigma_num(v, cfg: QuadratureConfig = DEFAULT) -> float:
    """Central section volume of the unit cube orthogonal to ``v``."""
    nrm = _norm(v)
    if nrm == 0:
        raise ValueError("v must be nonzero")
    return nrm * sinc_product_integral(v, 0.0, cfg)


def parallel_section_num(v, rho, cfg: QuadratureConfig = DEFAULT) -> float:
    """Volume of the section ``{q in Q_n : <q, v> = rho}``."""
    nrm = _norm(v)
    if nrm == 0:
        raise ValueError("v must be nonzero")
    return nrm * sinc_product_integral(v, 2.0 * float(rho), cfg)


def _check_unit(v, require_unit):
    if require_unit and abs(_norm(v) - 1.0) > _UNIT_TOL:
        raise ValueError("expected a unit vector")


def _groups(v):
    # indices sharing a coordinate value give identical entries
    seen = {}
    for i, x in enumerate(v):
        seen.setdefault(abs(float(x)), []).append(i)
    return seen


def sigma_grad(v, cfg: QuadratureConfig = DEFAULT, *, require_unit: bool = True) -> np.ndarray:
    """Gradient of ``v -> (1/pi) int prod sinc(v_i t) dt``.

    On the unit sphere this function coincides with the section volume, so
    its tangential part is the gradient of ``sigma`` on the sphere.
    """
    v = [float(x) for x in v]
    _check_unit(v, require_unit)
    if any(x == 0 for x in v):
        raise ValueError("all coordinates must be nonzero; strip zeros first")
    out = np.empty(len(v))
    for val, idx in _groups(v).items():
        k = idx[0]
        g = integrate(SincIntegrand.product(v, 0.0, {k: DSINC}), cfg).value
        out[idx] = g * np.sign(np.array(v)[idx])
    return out


def beta_entry(v, k: int, cfg: QuadratureConfig = DEFAULT, *, require_unit: bool = True) -> float:
    """Diagonal entry ``d^2/dv_k^2 + 1`` of the Lagrangian Hessian block."""
    v = [float(x) for x in v]
    _check_unit(v, require_unit)
    if len(v) < 4:
        raise ValueError("beta entries need n >= 4 for absolute convergence")
    if v[k] == 0:
        raise ValueError("v_k must be nonzero")
    return integrate(SincIntegrand.product(v, 0.0, {k: BETA}), cfg).value


def gamma_entry(v, j: int, k: int, cfg: QuadratureConfig = DEFAULT, *, require_unit: bool = True) -> float:
    """Off-diagonal entry ``d^2/(dv_j dv_k)`` of the Lagrangian Hessian block."""
    v = [float(x) for x in v]
    _check_unit(v, require_unit)
    if len(v) < 4:
        raise ValueError("gamma entries need n >= 4")
    if j == k:
        raise ValueError("gamma entries need j != k")
    if v[j] == 0 or v[k] == 0:
        raise ValueError("v_j and v_k must be nonzero")
    sign = math.copysign(1.0, v[j]) * math.copysign(1.0, v[k])
    return sign * integrate(SincIntegrand.product(v, 0.0, {j: DSINC, k: DSINC}), cfg).value

"""Hyperplane sections of the unit cube through Laplace-Polya integrals.

Exact rational tools (``laplace_polya``, ``box_density``) sit next to an
adaptive sinc-product quadrature (``sinc_quad``) whose inner loop runs in a
compiled extension when one is built.  ``critical`` and ``hessian`` build the
critical-direction and second-order analysis on top of both.
"""

from ._backend import BACKEND
from .box_density import RadicalValue, WeightVector, abs_moment, density, section_volume, sigma_exact
from .critical import F, RootResult, find_xi, scan_F
from .errors import ConsistencyError, NonConvergent, NoSignChange
from .hessian import delta_hat, local_max_certificate, saddle_gap
from .laplace_polya import eulerian, j_explicit, j_recursive, j_value
from .sinc_quad import QuadratureConfig, sigma_grad, sigma_num, sinc_product_integral

__all__ = [
    "BACKEND",
    "ConsistencyError",
    "F",
    "NoSignChange",
    "NonConvergent",
    "QuadratureConfig",
    "RadicalValue",
    "RootResult",
    "WeightVector",
    "abs_moment",
    "delta_hat",
    "density",
    "eulerian",
    "find_xi",
    "j_explicit",
    "j_recursive",
    "j_value",
    "local_max_certificate",
    "saddle_gap",
    "scan_F",
    "section_volume",
    "sigma_exact",
    "sigma_grad",
    "sigma_num",
    "sinc_product_integral",
]

"""Special functions required by the principal matrices"""

from .accuracy import Accuracy, DEFAULT_ACCURACY
from .bessel import bessel_k0, bessel_k0e, bessel_k1, bessel_k1e, log_bessel_k0
from .gamma import digamma, gamma_fn, gamma_ratio, trigamma
from .lambert import lambert_w0
from .legendre import legendre_q, legendre_q_scaled

__all__ = [
    "Accuracy", "DEFAULT_ACCURACY",
    "bessel_k0", "bessel_k0e", "bessel_k1", "bessel_k1e", "log_bessel_k0",
    "digamma", "gamma_fn", "gamma_ratio", "trigamma",
    "lambert_w0",
    "legendre_q", "legendre_q_scaled",
]

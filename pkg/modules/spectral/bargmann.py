# modules/spectral/bargmann.py
"""
Bargmann transform by adaptive quadrature:

    (B f)(z) = 2^{m/4} int f(x) exp(2 pi x.z - pi x.x - (pi/2) z.z) dx,   m <= 2,

and the Fock-space monomials zeta_alpha(z) = sqrt(pi^{|alpha|}/alpha!) z^alpha it sends h_alpha to.
"""

import math
from typing import Callable

import numpy as np
from scipy import integrate

import config
from core.errors import DomainError, QuadratureFailure
from core.specialfns import MultiIndex, log_multi_factorial
from core.utils import get_logger, timed

logger = get_logger("modules.spectral.bargmann")

# half-width of the integration box around the integrand's centre
BOX_HALF_WIDTH = 8.0


def fock_monomial(alpha: MultiIndex, z) -> complex:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.size != len(alpha):
        raise DomainError(f"point of dimension {z.size} for multi-index of length {len(alpha)}")
    scale = math.exp(0.5 * (sum(alpha) * math.log(math.pi) - log_multi_factorial(alpha)))
    return complex(scale * np.prod(z ** np.asarray(alpha)))


def bargmann_quadrature(f: Callable[[np.ndarray], float], z, m: int = None) -> complex:
    """
    (B f)(z) for a Gaussian-decaying f on R^m.

    Real and imaginary parts are integrated separately over the box
    Re(z)/2 +- 8 in each coordinate, outside of which the weight is below e^{-400}.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    m = z.size if m is None else m
    if m not in (1, 2) or z.size != m:
        raise DomainError(f"bargmann_quadrature supports m <= 2 with a matching point, got m={m}, z={z.tolist()}")
    zz = complex(np.dot(z, z))

    def integrand(x: np.ndarray) -> complex:
        return 2.0 ** (m / 4.0) * f(x) * np.exp(2.0 * math.pi * np.dot(x, z) - math.pi * np.dot(x, x)
                                                 - 0.5 * math.pi * zz)

    centre = z.real / 2.0
    lo, hi = centre - BOX_HALF_WIDTH, centre + BOX_HALF_WIDTH
    parts, errors = [], []
    with timed(logger, f"Bargmann quadrature at z={z.tolist()}"):
        for part in (np.real, np.imag):
            if m == 1:
                val, err = integrate.quad(lambda u: float(part(integrand(np.array([u])))), lo[0], hi[0],
                                          epsabs=1e-13, epsrel=1e-12, limit=200)
            else:
                val, err = integrate.dblquad(lambda v, u: float(part(integrand(np.array([u, v])))),
                                             lo[0], hi[0], lo[1], hi[1], epsabs=1e-12, epsrel=1e-11)
            parts.append(val)
            errors.append(err)
    tol = config.TOLERANCES["quadrature"]
    if max(errors) > tol:
        raise QuadratureFailure(f"Bargmann quadrature error estimate {max(errors):.3g} above {tol:g}")
    return complex(parts[0], parts[1])

# modules/kacgutz/kernel.py
"""
Kac-Gutzwiller kernels and the Gaussian identities behind them.

Responsibilities:
- K~(xi, eta) = 2 prod_l (4 pi sinh gamma_l)^{-1/2} exp(-1/4 sum((xi^2+eta^2) tanh(gamma/2) + (xi-eta)^2/sinh gamma))
- K_beta(xi, eta) = (cosh(sum_l sqrt(beta J_l) xi_l) cosh(sum_l sqrt(beta J_l) eta_l))^{1/2} K~(xi, eta), beta >= 0
- K''(x, y) = 2 prod_l lambda_l^{1/2} sum_alpha lambda^alpha h_alpha(x) h_alpha(y), eigenvalues 2 lambda^{alpha + 1/2}
- trace of the rescaled operator prod(lambda e^{beta J})^{-1/2} K_beta by quadrature
- The circulant B-matrices, their determinant and the quadratic-form identity
- Cramer's Gaussian identity e^{x.Ax/2} = (2 pi)^{-n/2} (det B)^{1/2} int e^{x.z} e^{-z.Bz/2} dz, B = A^{-1}
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import integrate

import config
from core.errors import DomainError, QuadratureFailure
from core.model import ModelParams
from core.specialfns import mehler_kernel
from core.utils import get_logger, timed

logger = get_logger("modules.kacgutz.kernel")


def _log_kernel_tilde(params: ModelParams, xi: np.ndarray, eta: np.ndarray) -> float:
    sh = np.sinh(params.gamma)
    log_prefactor = math.log(2.0) - 0.5 * float(np.sum(np.log(4.0 * math.pi * sh)))
    exponent = -0.25 * np.sum((xi ** 2 + eta ** 2) * np.tanh(params.gamma / 2.0) + (xi - eta) ** 2 / sh)
    return log_prefactor + float(exponent)


def _log_cosh(x: float) -> float:
    return float(np.logaddexp(x, -x)) - math.log(2.0)


def kernel_tilde(params: ModelParams, xi, eta) -> float:
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    return math.exp(_log_kernel_tilde(params, xi, eta))


def kernel_K(params: ModelParams, beta: float, xi, eta) -> float:
    """Kac-Gutzwiller kernel K_beta(xi, eta), defined for beta >= 0. Evaluated in log space."""
    if beta < 0:
        raise DomainError(f"kernel_K needs beta >= 0, got {beta}")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    s = np.sqrt(beta * params.J)
    log_weight = 0.5 * (_log_cosh(float(np.dot(s, xi))) + _log_cosh(float(np.dot(s, eta))))
    return math.exp(log_weight + _log_kernel_tilde(params, xi, eta))


def reduced_kernel(params: ModelParams, x, y) -> float:
    """K''(x, y) in Hermite coordinates; beta independent."""
    return 2.0 * float(np.prod(np.sqrt(params.lam))) * mehler_kernel(params, x, y)


def reduced_kernel_eigenvalue(params: ModelParams, alpha) -> float:
    return 2.0 * float(np.prod(params.lam ** (np.asarray(alpha) + 0.5)))


def kernel_trace_quadrature(params: ModelParams, beta: float) -> float:
    """prod_l (lambda_l e^{beta J_l})^{-1/2} int K_beta(xi, xi) dxi, m <= 2."""
    if params.m > 2:
        raise DomainError("kernel_trace_quadrature supports m <= 2")
    scale = float(np.prod((params.lam * np.exp(beta * params.J)) ** -0.5))
    tol = config.TOLERANCES["quadrature"]
    with timed(logger, f"kernel trace quadrature at beta={beta:g}"):
        if params.m == 1:
            value, err = integrate.quad(lambda u: kernel_K(params, beta, [u], [u]), -np.inf, np.inf,
                                        epsabs=0.0, epsrel=1e-11, limit=200)
        else:
            value, err = integrate.dblquad(lambda v, u: kernel_K(params, beta, [u, v], [u, v]),
                                           -np.inf, np.inf, -np.inf, np.inf, epsabs=0.0, epsrel=1e-10)
    if err > tol * max(1.0, abs(value)):
        raise QuadratureFailure(f"kernel trace: error estimate {err:.3g} above {tol:g}")
    return scale * value


# ----------------------
# B-matrices
# ----------------------
@dataclass(frozen=True)
class BMatrixReport:
    matrix: np.ndarray
    det: float
    det_closed: float
    min_eigenvalue: float

    @property
    def positive_definite(self) -> bool:
        return self.min_eigenvalue > 0.0

    @property
    def det_relative_error(self) -> float:
        return abs(self.det - self.det_closed) / abs(self.det_closed)


def kac_B_matrix(betaJ: float, gamma: float, n: int) -> BMatrixReport:
    """
    n x n circulant with cosh(gamma) on the diagonal and -1/2 for each cyclic
    neighbour, scaled by 1/(beta J sinh gamma). For n = 2 both neighbour
    contributions land on the same entry and add to -1.
    """
    if n < 2:
        raise DomainError(f"B-matrix needs n >= 2, got {n}")
    if betaJ <= 0 or gamma <= 0:
        raise DomainError("B-matrix needs beta J > 0 and gamma > 0")
    B = np.zeros((n, n))
    rows = np.arange(n)
    B[rows, rows] = math.cosh(gamma)
    np.add.at(B, (rows, (rows + 1) % n), -0.5)
    np.add.at(B, (rows, (rows - 1) % n), -0.5)
    B /= betaJ * math.sinh(gamma)
    sign, logdet = np.linalg.slogdet(B)
    det_closed = 4.0 / (2.0 * betaJ * math.sinh(gamma)) ** n * math.sinh(n * gamma / 2.0) ** 2
    return BMatrixReport(B, float(sign * math.exp(logdet)), det_closed, float(np.linalg.eigvalsh(B).min()))


def quadratic_form_identity(gamma: float, x) -> Tuple[float, float]:
    """
    Both sides of
      coth(g) sum x_i^2 - sum x_i x_{i-1}/sinh(g)
        = 1/2 (tanh(g/2) sum (x_i^2 + x_{i-1}^2) + sum (x_i - x_{i-1})^2 / sinh(g)),  x_0 = x_n.
    """
    x = np.asarray(x, dtype=float)
    prev = np.roll(x, 1)
    sh = math.sinh(gamma)
    lhs = np.sum(x ** 2) / math.tanh(gamma) - np.sum(x * prev) / sh
    rhs = 0.5 * (math.tanh(gamma / 2.0) * np.sum(x ** 2 + prev ** 2) + np.sum((x - prev) ** 2) / sh)
    return float(lhs), float(rhs)


def gaussian_identity_check(A, x) -> Tuple[float, float]:
    """
    (lhs, rhs) of Cramer's identity, rhs by adaptive quadrature on a box
    around the Gaussian's centre A x.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = A.shape[0]
    if n > 2 or A.shape != (n, n) or x.size != n:
        raise DomainError("gaussian_identity_check supports symmetric n x n matrices with n <= 2")
    if not np.allclose(A, A.T) or np.linalg.eigvalsh(A).min() <= 0:
        raise DomainError("A must be symmetric positive definite")
    B = np.linalg.inv(A)
    half_xAx = 0.5 * float(x @ A @ x)
    lhs = math.exp(half_xAx)
    centre = A @ x
    width = 12.0 * math.sqrt(float(np.linalg.eigvalsh(A).max()))

    def integrand(*z):
        z = np.asarray(z[::-1])
        return math.exp(float(x @ z) - 0.5 * float(z @ B @ z) - half_xAx)

    lo, hi = centre - width, centre + width
    if n == 1:
        value, err = integrate.quad(integrand, lo[0], hi[0], epsabs=0.0, epsrel=1e-11, limit=200)
    else:
        value, err = integrate.dblquad(integrand, lo[0], hi[0], lo[1], hi[1], epsabs=0.0, epsrel=1e-10)
    rhs = lhs * (2.0 * math.pi) ** (-n / 2.0) * math.sqrt(np.linalg.det(B)) * value
    tol = config.TOLERANCES["gaussian_identity"]
    if err > tol * abs(value) or abs(lhs - rhs) / lhs >= tol:
        raise QuadratureFailure(f"Cramer identity unmet: lhs={lhs!r}, rhs={rhs!r}, quad error={err:.3g}")
    return lhs, rhs

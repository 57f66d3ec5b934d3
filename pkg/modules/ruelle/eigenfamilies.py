# modules/ruelle/eigenfamilies.py
"""
Explicit eigenfunctions of L_beta.

- zero_eigenfunction: the Gaussian-times-plane-wave family annihilated by L_beta.
- half_eigenfunction: for lambda_l = 1/2, sinh(2 beta J.z) (eigenvalue e^{beta sum J})
  and P(z) sinh(2 beta J.z) with P linear, translation invariant along (1,...,1)
  (eigenvalue e^{beta sum J}/2).
- beta0_eigenpolynomial: for m = 1 the polynomial eigenfunctions of L_0.
- parity_split: even and odd parts of a sampled function.
"""

from math import comb
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from core.errors import DomainError
from core.model import ModelParams
from core.specialfns import MultiIndex
from modules.ruelle.transfer import EntireFunctionSample, sample_function


def zero_eigenfunction(params: ModelParams, beta: complex, n: MultiIndex, alpha: MultiIndex) -> EntireFunctionSample:
    """
    f(z) = exp(-beta sum_l J_l z_l^2/(2 lambda_l^2)) prod_l exp((2n_l+1) pi i alpha_l z_l/(2 lambda_l)),
    which satisfies L_beta f = 0 whenever |alpha| is odd.
    """
    n = np.asarray(n, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if n.size != params.m or alpha.size != params.m:
        raise DomainError("n and alpha must have length m")
    if int(alpha.sum()) % 2 != 1:
        raise DomainError(f"zero eigenfunctions need |alpha| odd, got alpha={alpha.astype(int).tolist()}")
    lam, J = params.lam, params.J
    freq = (2.0 * n + 1.0) * np.pi * alpha / (2.0 * lam)

    def f(z: np.ndarray) -> complex:
        z = np.asarray(z, dtype=complex)
        return np.exp(-beta * np.sum(J * z ** 2 / (2.0 * lam ** 2)) + 1j * np.dot(freq, z))

    return sample_function(params, f)


def half_eigenfunction(params: ModelParams, beta: complex, coefficients: Sequence[float] = None,
                       degree: int = 0) -> Tuple[EntireFunctionSample, complex]:
    """
    Eigenfunction/eigenvalue pair of the lambda = 1/2 family.

    degree 0: sinh(2 beta J.z), eigenvalue e^{beta sum J}.
    degree 1: (c.z) sinh(2 beta J.z) with sum(c) = 0, eigenvalue e^{beta sum J}/2.
    """
    if not params.is_half():
        raise DomainError("the sinh eigenfamily exists for lambda_l = 1/2 only")
    J = params.J
    rho = complex(np.exp(beta * params.total_J))
    if degree == 0:
        return sample_function(params, lambda z: np.sinh(2.0 * beta * np.dot(J, z))), rho
    if degree != 1:
        raise DomainError(f"degree must be 0 or 1, got {degree}")
    c = np.asarray(coefficients, dtype=float)
    if params.m < 2 or c.size != params.m:
        raise DomainError("degree 1 needs m >= 2 and m coefficients")
    if abs(c.sum()) > 1e-12:
        raise DomainError("degree-1 prefactor must be invariant under z -> z + t(1,...,1): sum(c) = 0")
    return (sample_function(params, lambda z: np.dot(c, z) * np.sinh(2.0 * beta * np.dot(J, z))),
            rho / 2.0)


def beta0_eigenpolynomial(params: ModelParams, degree: int) -> Polynomial:
    """
    Monic p_k with p_k(lambda z + lambda) + p_k(lambda z - lambda) = 2 lambda^k p_k(z), m = 1.

    L_0 is upper triangular on monomials, T[i, j] = C(j, i) lambda^j (1 + (-1)^{j-i}),
    so p_k follows by back substitution.
    """
    if params.m != 1:
        raise DomainError("beta0_eigenpolynomial is defined for m = 1")
    if degree < 0:
        raise DomainError(f"degree must be >= 0, got {degree}")
    lam = float(params.lam[0])
    k = degree
    T = np.zeros((k + 1, k + 1))
    for j in range(k + 1):
        for i in range(j + 1):
            T[i, j] = comb(j, i) * lam ** j * (1 + (-1) ** (j - i))
    target = 2.0 * lam ** k
    p = np.zeros(k + 1)
    p[k] = 1.0
    for i in range(k - 1, -1, -1):
        p[i] = -np.dot(T[i, i + 1 :], p[i + 1 :]) / (T[i, i] - target)
    return Polynomial(p)


def parity_split(F: EntireFunctionSample) -> Tuple[EntireFunctionSample, EntireFunctionSample]:
    """(F_even, F_odd) with F = F_even + F_odd."""
    even = F.with_evaluator(lambda z: 0.5 * (F(z) + F(-np.asarray(z))))
    odd = F.with_evaluator(lambda z: 0.5 * (F(z) - F(-np.asarray(z))))
    return even, odd

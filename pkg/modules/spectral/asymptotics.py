# modules/spectral/asymptotics.py
"""
Large-|beta| behaviour of the leading eigenvalues and the combinatorics of the
lambda = 1/2 eigenvalue branches.

For lambda_l < 1/2 the leading eigenvalues behave like

    beta -> +inf:  lambda^alpha exp(beta J.(1-Lambda)^{-1} lambda)            (even and odd)
    beta -> -inf:  (-1)^{|alpha|} lambda^alpha exp(-beta J.(1+Lambda)^{-1} lambda)   (even)
                  -(-1)^{|alpha|} lambda^alpha exp(-beta J.(1+Lambda)^{-1} lambda)   (odd)

The -inf exponent follows the derivation through the (1+Lambda)^{-1} rescaling
of the eigenfunction. statement_form=True instead uses the displayed
exp(beta J.(1-Lambda)^{-1} lambda) with signs (-1)^{|alpha|} (even) and
(-1)^{|alpha|+1} (odd) for both directions.
"""

from math import comb
from typing import List, Optional, Tuple

import numpy as np

import config
from core.errors import DomainError, PoleAt
from core.model import ModelParams
from core.specialfns import MultiIndex, lambda_power
from core.utils import get_logger
from modules.kacgutz.basis import enumerate_basis
from modules.spectral.eigen import eigenvalues

logger = get_logger("modules.spectral.asymptotics")

DIRECTIONS = ("+inf", "-inf")


def asymptotic_prediction(params: ModelParams, alpha: MultiIndex, beta: float, direction: str, parity: str,
                          statement_form: bool = False) -> float:
    if np.any(params.lam >= 0.5):
        raise DomainError(f"asymptotics need every lambda_l < 1/2, got {params.lam.tolist()}")
    if direction not in DIRECTIONS:
        raise DomainError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    if parity not in ("even", "odd"):
        raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")
    if len(alpha) != params.m:
        raise DomainError(f"multi-index of length {len(alpha)} for an m={params.m} model")

    size = sum(alpha)
    lam_alpha = lambda_power(params.lam, alpha)
    if direction == "+inf":
        return lam_alpha * float(np.exp(beta * params.coupling))
    if statement_form:
        base = float(np.exp(beta * params.coupling))
    else:
        base = float(np.exp(-beta * np.sum(params.J * params.lam / (1.0 + params.lam))))
    sign = (-1) ** size if parity == "even" else (-1) ** (size + 1)
    return sign * lam_alpha * base


def asymptotic_branches(params: ModelParams, beta: float, direction: str, parity: str, N: Optional[int] = None,
                        count: int = 5, statement_form: bool = False) -> List[Tuple[MultiIndex, float, float]]:
    """
    (alpha, eigenvalue, prediction) for the `count` leading branches of one parity.

    The k-th largest eigenvalue of the parity block is paired with the k-th
    largest predicted value of that parity.
    """
    spectrum = eigenvalues(params, beta, N, with_tail=False)
    observed = spectrum.of_parity(parity)
    candidates = enumerate_basis(params.m, spectrum.N).indices
    predicted = sorted(((asymptotic_prediction(params, a, beta, direction, parity, statement_form), a)
                        for a in candidates), key=lambda t: -t[0])
    rows = []
    for k in range(min(count, observed.size, len(predicted))):
        value, alpha = predicted[k]
        rows.append((alpha, float(observed[k]), value))
    return rows


def relative_deviation(observed: float, predicted: float) -> float:
    return abs(observed - predicted) / abs(predicted)


# ----------------------
# lambda = 1/2 combinatorics
# ----------------------
def binom_identity_check(m: int, r: int, l: int) -> Tuple[int, int]:
    """
    Both sides of
      sum_k C(m, 2k) C(m-2k+r, l) = sum_k C(m, 2k+1) C(m-2k+r-1, l).
    """
    if m < 2 or r < 0 or not 0 <= l <= m - 1:
        raise DomainError(f"binomial identity needs m >= 2, r >= 0, 0 <= l <= m-1; got m={m}, r={r}, l={l}")
    lhs = sum(comb(m, 2 * k) * comb(m - 2 * k + r, l) for k in range(m // 2 + 1))
    rhs = sum(comb(m, 2 * k + 1) * comb(m - 2 * k + r - 1, l) for k in range((m - 1) // 2 + 1))
    return lhs, rhs


def half_reduction_check(params: ModelParams, beta: float, r_max: int = 40) -> Tuple[float, float]:
    """
    (product, closed) for the contribution of the rho_1 = e^{beta sum J} branches:

      prod_{k=0}^{m} prod_{r=0}^{r_max} (1 - lambda_0^{k+r} rho_1)^{C(m,k) C(m+r-2,r) (-1)^{k+1}}
      versus (1 - lambda_0 rho_1) / (1 - rho_1).

    Exponents are collected per power n = k + r before any factor is
    evaluated, so factors whose net exponent is zero never enter.
    """
    if not params.is_half():
        raise DomainError("half_reduction_check needs every lambda_l = 1/2")
    m = params.m
    if m < 2:
        raise DomainError("half_reduction_check needs m >= 2")
    if r_max < 0:
        raise DomainError(f"r_max must be >= 0, got {r_max}")
    rho1 = float(np.exp(beta * params.total_J))
    if abs(1.0 - rho1) < config.TOLERANCES["pole"]:
        raise PoleAt(beta, 1.0, (0,) * m, f"rho_1 = 1 at beta={beta!r}")

    exponents = {}
    for k in range(m + 1):
        for r in range(r_max + 1):
            exponents[k + r] = exponents.get(k + r, 0) + comb(m, k) * comb(m + r - 2, r) * (-1) ** (k + 1)
    product = 1.0
    for n, e in sorted(exponents.items()):
        if e:
            product *= (1.0 - 0.5 ** n * rho1) ** e
    closed = (1.0 - 0.5 * rho1) / (1.0 - rho1)
    logger.debug("half reduction at rho_1=%g: product=%r closed=%r", rho1, product, closed)
    return product, closed

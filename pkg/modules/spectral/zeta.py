# modules/spectral/zeta.py
"""
Fredholm determinants and the Ruelle zeta function.

    zeta_R(z, beta) = prod_{alpha in {0,1}^m} det(1 - z lambda^alpha L_beta)^{(-1)^{|alpha|+1}}

Each determinant is the finite product over the truncated spectrum. Every
factor is also evaluated at degree N-4; a relative drift above
TOLERANCES["det_drift"] raises a ConvergenceWarning.

Cross-check: zeta_series_partial sums exp(sum_n z^n Z_n / n) from the
brute-force partition functions.
"""

import warnings
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Optional

import numpy as np

import config
from core.errors import ConvergenceDomain, ConvergenceWarning, DomainError, PoleAt
from core.model import ModelParams, check_period, partition_function_bruteforce
from core.specialfns import MultiIndex, binary_indices, lambda_power
from core.utils import CompensatedSum, get_logger
from modules.spectral.eigen import SpectralResult, default_degree, eigenvalues

logger = get_logger("modules.spectral.zeta")


@dataclass(frozen=True)
class ZetaValue:
    z: complex
    beta: float
    value: complex
    factors: Dict[MultiIndex, complex]
    N: int
    factors_lookback: Dict[MultiIndex, complex] = field(default_factory=dict)

    def drift(self) -> Dict[MultiIndex, float]:
        """Relative change of each factor between degree N-4 and N."""
        out = {}
        for alpha, d in self.factors.items():
            if alpha in self.factors_lookback:
                out[alpha] = abs(d - self.factors_lookback[alpha]) / max(abs(d), np.finfo(float).tiny)
        return out

    def to_dict(self) -> dict:
        return {
            "z": self.z,
            "beta": self.beta,
            "value": self.value,
            "N": self.N,
            "factors": [{"alpha": list(a), "exponent": (-1) ** (sum(a) + 1), "det": d,
                         "det_lookback": self.factors_lookback.get(a)} for a, d in self.factors.items()],
        }


def fredholm_det(spectrum: SpectralResult, z: complex, scale: float = 1.0) -> complex:
    """prod_k (1 - z scale rho_k) over every computed eigenvalue."""
    return complex(np.prod(1.0 - complex(z) * scale * spectrum.eigenvalues))


def _factors(params: ModelParams, spectrum: SpectralResult, z: complex) -> Dict[MultiIndex, complex]:
    return {alpha: fredholm_det(spectrum, z, lambda_power(params.lam, alpha)) for alpha in binary_indices(params.m)}


def _combine(beta: float, z: complex, factors: Dict[MultiIndex, complex]) -> complex:
    pole_tol = config.TOLERANCES["pole"]
    value = 1.0 + 0.0j
    for alpha, d in factors.items():
        if sum(alpha) % 2:
            value *= d
        elif abs(d) < pole_tol:
            raise PoleAt(beta, z, alpha)
        else:
            value /= d
    return value


def zeta(params: ModelParams, beta: float, z: complex, N: Optional[int] = None, threads: int = 1) -> ZetaValue:
    z = complex(z)
    N = default_degree(params.m) if N is None else int(N)
    spectrum = eigenvalues(params, beta, N, with_tail=False, threads=threads)
    factors = _factors(params, spectrum, z)
    value = _combine(float(beta), z, factors)

    lookback = {}
    back_N = N - int(config.TRUNCATION["det_lookback"])
    if back_N >= 2:
        lookback = _factors(params, eigenvalues(params, beta, back_N, with_tail=False, threads=threads), z)
    result = ZetaValue(z, float(beta), value, factors, N, lookback)

    drift_tol = config.TOLERANCES["det_drift"]
    drifting = {a: d for a, d in result.drift().items() if d > drift_tol}
    if drifting:
        msg = (f"determinants not converged at N={N} (beta={beta:g}, z={z}): "
               + ", ".join(f"alpha={list(a)} drift {d:.2e}" for a, d in drifting.items()))
        logger.warning(msg)
        warnings.warn(msg, ConvergenceWarning, stacklevel=2)
    return result


def series_radius(params: ModelParams, beta: float) -> float:
    """|z| bound of the series domain: |z| 2 e^{|beta| c} < 1."""
    return 0.5 * float(np.exp(-abs(beta) * params.coupling))


def zeta_series_partial(params: ModelParams, beta: float, z: complex, n_terms: int,
                        threads: int = 1, deterministic: bool = False) -> complex:
    """exp(sum_{n <= n_terms} z^n Z_n(beta) / n) with brute-force Z_n."""
    z = complex(z)
    if abs(z) >= series_radius(params, beta):
        raise ConvergenceDomain(f"|z|={abs(z):g} outside the series disc of radius {series_radius(params, beta):g} at beta={beta:g}")
    if n_terms < 0:
        raise DomainError(f"n_terms must be >= 0, got {n_terms}")
    if z == 0:
        return 1.0 + 0.0j
    if n_terms:
        check_period(n_terms)
    acc = CompensatedSum()
    for n in range(1, n_terms + 1):
        Zn = partition_function_bruteforce(params, beta, n, threads=threads, deterministic=deterministic)
        acc.add(z ** n * Zn / n)
    return complex(np.exp(acc.value))


def zeta_half_factorization(params: ModelParams, beta: float, z: complex, N: Optional[int] = None,
                            threads: int = 1) -> complex:
    """
    prod_{k=0}^{m} det(1 - z lambda_0^k L_beta)^{C(m,k)(-1)^{k+1}} for lambda_l = lambda_0 = 1/2:
    the alpha-product with equal scales grouped by |alpha|.
    """
    if not params.is_half():
        raise DomainError("zeta_half_factorization needs every lambda_l = 1/2")
    z = complex(z)
    spectrum = eigenvalues(params, beta, N, with_tail=False, threads=threads)
    value = 1.0 + 0.0j
    for k in range(params.m + 1):
        d = fredholm_det(spectrum, z, 0.5 ** k)
        if k % 2 == 0 and abs(d) < config.TOLERANCES["pole"]:
            raise PoleAt(float(beta), z, (1,) * k + (0,) * (params.m - k))
        value *= d ** (comb(params.m, k) * (-1) ** (k + 1))
    return value

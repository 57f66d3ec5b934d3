# modules/ruelle/transfer.py
"""
Ruelle transfer operator

    (L_beta F)(z) = exp(beta J.z) F(Lambda z + lambda) + exp(-beta J.z) F(Lambda z - lambda)

acting on functions holomorphic on a polydisc around the origin.

Responsibilities:
- Fixed-point (Atiyah-Bott) traces of L_beta^n, summed over the 2^n branch words.
- Closed form of trace L_beta.
- Pointwise application of L_beta and relative eigen-equation residuals.
- The beta = 0 spectrum {2 lambda^alpha}.

Key classes / functions:
- AffineContraction(scale, shift): psi(z) = scale*z + shift with |scale| < 1; compose, fixed_point.
- branch_map(params, spins): the branches psi_s(z) = Lambda z + s lambda.
- EntireFunctionSample(evaluator, sample_points, radius=None, serial=False)
- atiyah_bott_trace(phi_at_fix, scale)
- ruelle_trace_power(params, beta, n), ruelle_trace_closed(params, beta)
- apply_ruelle(params, beta, F, z), ruelle_residual(params, beta, F, rho)
- spectrum_beta0(params, N)
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

import config
from core.errors import DomainError
from core.model import ModelParams, check_period, configuration_sum
from core.specialfns import lambda_power
from core.utils import get_logger, parallel_map, sample_points, timed
from modules.kacgutz.basis import enumerate_basis

logger = get_logger("modules.ruelle.transfer")


@dataclass(frozen=True)
class AffineContraction:
    """
    psi(z) = scale * z + shift with a diagonal scale.

    shift may carry leading batch axes (one row per branch word); scale is shared.
    """
    scale: np.ndarray
    shift: np.ndarray

    def __post_init__(self):
        scale = np.atleast_1d(np.asarray(self.scale))
        shift = np.atleast_1d(np.asarray(self.shift))
        if np.any(np.abs(scale) >= 1.0):
            raise DomainError(f"contraction needs |scale| < 1 on the diagonal, got {scale.tolist()}")
        if scale.ndim != 1 or shift.shape[-1] != scale.size:
            raise DomainError(f"shift of shape {shift.shape} does not match a diagonal of length {scale.size}")
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "shift", shift)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return self.scale * z + self.shift

    def compose(self, inner: "AffineContraction") -> "AffineContraction":
        """self o inner."""
        return AffineContraction(self.scale * inner.scale, self.scale * inner.shift + self.shift)

    def fixed_point(self) -> np.ndarray:
        return self.shift / (1.0 - self.scale)


@dataclass(frozen=True)
class EntireFunctionSample:
    """
    A holomorphic function known only through evaluation.

    radius is the polydisc the function is declared on (None for entire
    functions). serial=True asks callers not to evaluate it from several threads.
    """
    evaluator: Callable[[np.ndarray], complex]
    sample_points: np.ndarray
    radius: Optional[np.ndarray] = None
    serial: bool = False

    def __call__(self, z) -> complex:
        return complex(self.evaluator(np.asarray(z)))

    def with_evaluator(self, evaluator: Callable[[np.ndarray], complex]) -> "EntireFunctionSample":
        return EntireFunctionSample(evaluator, self.sample_points, self.radius, self.serial)


def default_sample_points(params: ModelParams) -> np.ndarray:
    """32 seeded points with |z_l| <= 0.9 min_l lambda_l/(1-lambda_l)."""
    radius = config.SAMPLING["radius_fraction"] * float(np.min(params.lam / (1.0 - params.lam)))
    return sample_points(params.m, radius)


def admissible_radius(params: ModelParams) -> np.ndarray:
    """A polydisc radius R_l > lambda_l/(1-lambda_l) containing the default samples and their images."""
    return params.lam / (1.0 - params.lam) / config.SAMPLING["radius_fraction"]


def sample_function(params: ModelParams, evaluator: Callable[[np.ndarray], complex],
                    entire: bool = True, serial: bool = False) -> EntireFunctionSample:
    radius = None if entire else admissible_radius(params)
    return EntireFunctionSample(evaluator, default_sample_points(params), radius, serial)


# ----------------------
# Traces
# ----------------------
def atiyah_bott_trace(phi_at_fix: complex, scale) -> complex:
    """phi(z_fix) / det(1 - psi'(z_fix)) for a diagonal affine contraction."""
    scale = np.atleast_1d(np.asarray(scale))
    if np.any(np.abs(scale) >= 1.0):
        raise DomainError(f"Atiyah-Bott trace needs |scale| < 1, got {scale.tolist()}")
    return complex(phi_at_fix) / complex(np.prod(1.0 - scale))


def branch_map(params: ModelParams, spins: np.ndarray) -> AffineContraction:
    """psi_s(z) = Lambda z + s lambda, one row per entry of spins."""
    spins = np.asarray(spins, dtype=float).reshape(-1, 1)
    return AffineContraction(params.lam, spins * params.lam)


def _branch_weights(params: ModelParams, beta: complex, spins: np.ndarray) -> np.ndarray:
    """
    Weight of each branch word sigma_1..sigma_n of L_beta^n at the fixed point
    of psi_{sigma_n} o ... o psi_{sigma_1}.
    """
    n = spins.shape[1]
    composed = branch_map(params, spins[:, 0])
    for k in range(1, n):
        composed = branch_map(params, spins[:, k]).compose(composed)
    w = composed.fixed_point()
    exponent = np.zeros((spins.shape[0], params.m))
    for k in range(n):
        exponent += spins[:, k : k + 1] * w
        w = branch_map(params, spins[:, k])(w)
    return np.exp(beta * (exponent @ params.J))


def ruelle_trace_power(params: ModelParams, beta: complex, n: int,
                       threads: int = 1, deterministic: bool = False) -> complex:
    """
    trace L_beta^n as the sum of Atiyah-Bott contributions over all 2^n branch words.

    Satisfies Z_n(beta) = prod_l (1 - lambda_l^n) * trace.
    """
    n = check_period(n)
    threads = 1 if deterministic else max(1, int(threads))
    with timed(logger, f"trace L^{n} over {1 << n} branch words"):
        phi_sum = configuration_sum(n, lambda s: _branch_weights(params, beta, s), threads)
    return atiyah_bott_trace(phi_sum, params.lam ** n)


def ruelle_trace_closed(params: ModelParams, beta: complex) -> complex:
    """2 exp(sum_l beta J_l lambda_l/(1-lambda_l)) / prod_l (1-lambda_l)."""
    return complex(2.0 * np.exp(beta * params.coupling) / np.prod(1.0 - params.lam))


# ----------------------
# Pointwise action
# ----------------------
def apply_ruelle(params: ModelParams, beta: complex, F: EntireFunctionSample, z) -> complex:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.size != params.m:
        raise DomainError(f"point of dimension {z.size} for an m={params.m} model")
    plus, minus = branch_map(params, [1.0, -1.0])(z)
    if F.radius is not None:
        for p in (plus, minus):
            if np.any(np.abs(p) >= F.radius):
                raise DomainError(f"shifted point {p.tolist()} leaves the polydisc of radius {np.asarray(F.radius).tolist()}")
    a = beta * np.dot(params.J, z)
    return complex(np.exp(a) * F(plus) + np.exp(-a) * F(minus))


def ruelle_residual(params: ModelParams, beta: complex, F: EntireFunctionSample, rho: complex,
                    threads: int = 1) -> float:
    """max over sample points of |rho F(z) - (L_beta F)(z)| / (1 + |rho F(z)|)."""
    points = np.atleast_2d(F.sample_points)
    if points.shape[0] == 0:
        raise DomainError("ruelle_residual needs at least one sample point")

    def one(z: np.ndarray) -> float:
        lhs = rho * F(z)
        return abs(lhs - apply_ruelle(params, beta, F, z)) / (1.0 + abs(lhs))

    workers = 1 if F.serial else threads
    return float(max(parallel_map(one, list(points), workers)))


def spectrum_beta0(params: ModelParams, max_total_degree: int) -> list:
    """{2 lambda^alpha : |alpha| <= N}, sorted descending."""
    basis = enumerate_basis(params.m, max_total_degree)
    return sorted((2.0 * lambda_power(params.lam, a) for a in basis.indices), reverse=True)

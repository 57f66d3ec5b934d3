# core/model.py
"""
Kac-Baker lattice model: parameters, periodic interaction energies and the
brute-force partition function over all period-n spin configurations.

Responsibilities:
- Validate (m, lambda, J) and derive gamma_l = -log lambda_l.
- Evaluate U_n(sigma) = -sum_l J_l/(1-lambda_l^n) sum_{k<n} sum_{i=1..n} sigma_k sigma_{k+i} lambda_l^i.
- Enumerate the 2^n configurations in fixed blocks and sum Boltzmann weights
  with correctly rounded block partials recombined in block order.

API:
- validate_params(m, lam, J) -> ModelParams
- periodic_energy(params, config) -> float
- periodic_energies(params, spins) -> np.ndarray
- configuration_sum(n, term_fn, threads=1) -> complex
- partition_function_bruteforce(params, beta, n, threads=1, deterministic=False) -> float
- energy_bound(params, n), trivial_zero(params, k), max_period()
"""

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple

import numpy as np

import config
from core.errors import CapExceeded, DomainError
from core.utils import CompensatedSum, exact_sum, get_logger, parallel_map, timed

logger = get_logger("core.model")


@dataclass(frozen=True, eq=False)
class ModelParams:
    m: int
    lam: np.ndarray
    J: np.ndarray
    gamma: np.ndarray = field(init=False)

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        J = np.array(self.J, dtype=float)
        gamma = -np.log(lam)
        for arr in (lam, J, gamma):
            arr.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "gamma", gamma)

    @property
    def coupling(self) -> float:
        """c = sum_l J_l lambda_l / (1 - lambda_l)."""
        return float(np.sum(self.J * self.lam / (1.0 - self.lam)))

    @property
    def total_J(self) -> float:
        return float(np.sum(self.J))

    def is_half(self, tol: float = 1e-15) -> bool:
        return bool(np.all(np.abs(self.lam - 0.5) <= tol))

    def permuted(self, order: Sequence[int]) -> "ModelParams":
        order = list(order)
        return ModelParams(self.m, self.lam[order], self.J[order])

    def to_dict(self) -> dict:
        return {"m": self.m, "lambda": self.lam.tolist(), "J": self.J.tolist()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelParams):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.lam, other.lam) and np.array_equal(self.J, other.J)

    def __hash__(self) -> int:
        return hash((self.m, tuple(self.lam.tolist()), tuple(self.J.tolist())))

    def __repr__(self) -> str:
        return f"ModelParams(m={self.m}, lambda={self.lam.tolist()}, J={self.J.tolist()})"


@dataclass(frozen=True)
class SpinConfig:
    spins: Tuple[int, ...]

    def __post_init__(self):
        spins = tuple(int(s) for s in self.spins)
        if not spins:
            raise DomainError("SpinConfig needs period n >= 1")
        if any(s not in (1, -1) for s in spins):
            raise DomainError(f"spins must be +1 or -1, got {spins}")
        object.__setattr__(self, "spins", spins)

    @property
    def n(self) -> int:
        return len(self.spins)

    def __getitem__(self, k: int) -> int:
        return self.spins[k % self.n]

    def rotated(self, k: int) -> "SpinConfig":
        k %= self.n
        return SpinConfig(self.spins[k:] + self.spins[:k])

    def flipped(self) -> "SpinConfig":
        return SpinConfig(tuple(-s for s in self.spins))


def validate_params(m: int, lam: Sequence[float], J: Sequence[float]) -> ModelParams:
    """Build ModelParams, rejecting m = 0, lambda_l outside (0,1) and J_l <= 0."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    J = np.atleast_1d(np.asarray(J, dtype=float))
    if m is None:
        m = lam.size
    m = int(m)
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if lam.size != m or J.size != m:
        raise DomainError(f"lambda and J must both have length m={m}, got {lam.size} and {J.size}")
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(J))):
        raise DomainError("lambda and J must be finite")
    if np.any(lam <= 0.0) or np.any(lam >= 1.0):
        raise DomainError(f"every lambda_l must lie in (0, 1), got {lam.tolist()}")
    if np.any(J <= 0.0):
        raise DomainError(f"every J_l must be > 0, got {J.tolist()}")
    return ModelParams(m, lam, J)


def max_period() -> int:
    raw = os.environ.get(config.LIMITS["max_n_env"])
    if raw is None:
        return int(config.LIMITS["max_n"])
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"{config.LIMITS['max_n_env']} must be an integer, got {raw!r}")


def check_period(n: int) -> int:
    n = int(n)
    if n < 1:
        raise DomainError(f"period n must be >= 1, got {n}")
    cap = max_period()
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap n_max={cap} (set {config.LIMITS['max_n_env']} to raise it)")
    return n


# ----------------------
# Energies
# ----------------------
def periodic_weights(params: ModelParams, n: int) -> np.ndarray:
    """w_i = sum_l J_l lambda_l^i / (1 - lambda_l^n) for i = 1..n."""
    i = np.arange(1, n + 1)
    lam = params.lam[:, None]
    return np.sum(params.J[:, None] * lam ** i / (1.0 - lam ** n), axis=0)


def cyclic_correlations(spins: np.ndarray) -> np.ndarray:
    """corr[:, i-1] = sum_k sigma_k sigma_{k+i} (cyclic), i = 1..n."""
    spins = np.atleast_2d(spins)
    n = spins.shape[1]
    return np.stack([np.sum(spins * np.roll(spins, -i, axis=1), axis=1) for i in range(1, n + 1)], axis=1)


def periodic_energies(params: ModelParams, spins: np.ndarray) -> np.ndarray:
    spins = np.atleast_2d(np.asarray(spins, dtype=float))
    return -cyclic_correlations(spins) @ periodic_weights(params, spins.shape[1])


def periodic_energy(params: ModelParams, spin_config: SpinConfig) -> float:
    return float(periodic_energies(params, np.array([spin_config.spins]))[0])


def energy_bound(params: ModelParams, n: int) -> float:
    """|U_n| <= n sum_l J_l lambda_l / (1 - lambda_l)."""
    return n * params.coupling


# ----------------------
# Enumeration
# ----------------------
def spin_block(n: int, start: int, stop: int) -> np.ndarray:
    """Configurations start..stop-1 in binary order; bit 0 maps to +1."""
    idx = np.arange(start, stop, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return 1.0 - 2.0 * bits


def configuration_sum(n: int, term_fn: Callable[[np.ndarray], np.ndarray], threads: int = 1) -> complex:
    """
    sum over all sigma in {+1,-1}^n of term_fn(sigma), evaluated block-wise.

    term_fn receives a (block, n) array and returns the per-row terms.
    """
    total = 1 << n
    block = 1 << int(config.LIMITS["block_bits"])
    starts = list(range(0, total, block))

    def run(start: int) -> complex:
        return exact_sum(term_fn(spin_block(n, start, min(start + block, total))))

    partials = parallel_map(run, starts, threads)
    return CompensatedSum().extend(partials).value


def partition_function_bruteforce(params: ModelParams, beta: float, n: int,
                                  threads: int = 1, deterministic: bool = False) -> float:
    """Z_n(beta) = sum over the 2^n period-n configurations of exp(-beta U_n)."""
    n = check_period(n)
    threads = 1 if deterministic else max(1, int(threads))
    w = periodic_weights(params, n)

    def terms(spins: np.ndarray) -> np.ndarray:
        return np.exp(beta * (cyclic_correlations(spins) @ w))

    with timed(logger, f"Z_{n} over {1 << n} configurations"):
        value = configuration_sum(n, terms, threads)
    return value.real


def trivial_zero(params: ModelParams, k: int = 0) -> complex:
    """beta_k = (log 2 + 2 pi i k) / sum_l J_l for models with every lambda_l = 1/2."""
    if not params.is_half():
        raise DomainError("trivial zeros are defined for lambda_l = 1/2 only")
    return complex(math.log(2.0), 2.0 * math.pi * k) / params.total_J

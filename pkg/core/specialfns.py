# core/specialfns.py
"""
Special functions in the normalization used throughout kaczeta.

Responsibilities:
- Log-factorials from a shared, lazily grown scipy.special.gammaln table.
- Multi-index helpers (total degree, alpha!, lambda^alpha).
- Orthonormal Hermite functions h_n on R with h_0(x) = 2^{1/4} exp(-pi x^2),
  and their tensor products h_alpha on R^m.
- Associated Laguerre polynomials L_n^{(mu)} by the three-term recurrence.
- The polynomial confluent hypergeometric function Phi(-n, mu+1; x).
- Mehler's kernel sum_alpha lambda^alpha h_alpha(x) h_alpha(y), closed form and partial sums.

API:
- log_factorial(n) / log_factorials(array)
- hermite_table(n_max, x, weighted=True) -> array (n_max+1, len(x))
- hermite(alpha, x)
- laguerre(n, mu, x), laguerre_table(n_max, mu, x)
- confluent_phi(n, mu, x), confluent_phi_series(n, mu, x)
- mehler_kernel(params, x, y), mehler_partial_sum(params, x, y, N)
"""

import math
import threading
from itertools import product
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import special

from core.errors import DomainError

MultiIndex = Tuple[int, ...]
ArrayLike = Union[float, np.ndarray, Sequence[float]]

SQRT_PI = math.sqrt(math.pi)

_LOG_FACT = np.zeros(1)
_LOG_FACT_LOCK = threading.Lock()


def _ensure_log_factorials(n: int) -> np.ndarray:
    global _LOG_FACT
    if n < _LOG_FACT.size:
        return _LOG_FACT
    with _LOG_FACT_LOCK:
        if n >= _LOG_FACT.size:
            size = max(n + 1, 2 * _LOG_FACT.size, 256)
            _LOG_FACT = special.gammaln(np.arange(size, dtype=float) + 1.0)
    return _LOG_FACT


def log_factorial(n: int) -> float:
    """ln(n!) for integer n >= 0."""
    if n < 0:
        raise DomainError(f"log_factorial undefined for n={n}")
    return float(_ensure_log_factorials(int(n))[int(n)])


def log_factorials(n: np.ndarray) -> np.ndarray:
    """Vectorised ln(n!) over a nonnegative integer array."""
    n = np.asarray(n, dtype=int)
    if n.size and n.min() < 0:
        raise DomainError("log_factorials: negative argument")
    table = _ensure_log_factorials(int(n.max()) if n.size else 0)
    return table[n]


# ----------------------
# Multi-indices
# ----------------------
def total_degree(alpha: MultiIndex) -> int:
    return int(sum(alpha))


def log_multi_factorial(alpha: MultiIndex) -> float:
    """ln(alpha!) = sum_i ln(alpha_i!)."""
    return float(sum(log_factorial(a) for a in alpha))


def lambda_power(lam: np.ndarray, alpha: MultiIndex) -> float:
    return float(np.prod(np.asarray(lam, dtype=float) ** np.asarray(alpha)))


def binary_indices(m: int):
    """All alpha in {0,1}^m, ordered by total degree then lexicographically."""
    return sorted(product((0, 1), repeat=m), key=sum)


# ----------------------
# Hermite functions
# ----------------------
def hermite_table(n_max: int, x: ArrayLike, weighted: bool = True) -> np.ndarray:
    """
    One-dimensional Hermite functions h_0..h_{n_max} at the points x.

    Uses h_{n+1} = (2 sqrt(pi) x / sqrt(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}.
    With weighted=False the Gaussian factor exp(-pi x^2) is omitted, which
    is what quadrature rules carrying their own weight need.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((n_max + 1, x.size))
    h0 = 2.0 ** 0.25 * (np.exp(-math.pi * x * x) if weighted else np.ones_like(x))
    out[0] = h0
    if n_max >= 1:
        out[1] = 2.0 * SQRT_PI * x * h0
    for n in range(1, n_max):
        out[n + 1] = (2.0 * SQRT_PI * x / math.sqrt(n + 1)) * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite(alpha: MultiIndex, x: ArrayLike) -> float:
    """h_alpha(x) = prod_i h_{alpha_i}(x_i) on R^m."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size != len(alpha):
        raise DomainError(f"hermite: point of dimension {x.size} for multi-index of length {len(alpha)}")
    value = 1.0
    for a, xi in zip(alpha, x):
        value *= hermite_table(a, xi)[a, 0]
    return float(value)


# ----------------------
# Laguerre / confluent hypergeometric
# ----------------------
def laguerre_table(n_max: int, mu: int, x: ArrayLike) -> np.ndarray:
    """L_0^{(mu)}..L_{n_max}^{(mu)} at x; shape (n_max+1,) + shape(x)."""
    if n_max < 0 or mu < 0:
        raise DomainError(f"laguerre: need n >= 0 and mu >= 0, got n={n_max}, mu={mu}")
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = mu + 1.0 - x
    for n in range(1, n_max):
        out[n + 1] = ((2 * n + mu + 1.0 - x) * out[n] - (n + mu) * out[n - 1]) / (n + 1)
    return out


def laguerre(n: int, mu: int, x: ArrayLike):
    """Associated Laguerre polynomial L_n^{(mu)}(x)."""
    values = laguerre_table(n, mu, x)[n]
    return float(values) if np.ndim(values) == 0 else values


def confluent_phi(n: int, mu: int, x: ArrayLike):
    """Phi(-n, mu+1; x) = n! mu! / (n+mu)! * L_n^{(mu)}(x)."""
    if n < 0 or mu < 0:
        raise DomainError(f"confluent_phi: polynomial case needs n >= 0 and mu >= 0, got n={n}, mu={mu}")
    scale = math.exp(log_factorial(n) + log_factorial(mu) - log_factorial(n + mu))
    return scale * laguerre(n, mu, x)


def confluent_phi_series(n: int, mu: int, x: float) -> float:
    """Phi(-n, mu+1; x) by its terminating series sum_k (-n)_k/(mu+1)_k x^k/k!."""
    if n < 0 or mu < 0:
        raise DomainError(f"confluent_phi_series: need n >= 0 and mu >= 0, got n={n}, mu={mu}")
    term = 1.0
    total = 1.0
    for k in range(n):
        term *= (k - n) / (mu + 1.0 + k) * x / (k + 1.0)
        total += term
    return total


# ----------------------
# Mehler kernel
# ----------------------
def mehler_kernel(params, x: ArrayLike, y: ArrayLike) -> float:
    """
    Closed form of sum_alpha lambda^alpha h_alpha(x) h_alpha(y):
    prod_l (lambda_l sinh gamma_l)^{-1/2} exp(-1/4 sum((xi^2+eta^2) tanh(gamma/2) + (xi-eta)^2/sinh gamma)),
    with xi = 2 sqrt(pi) x and eta = 2 sqrt(pi) y.
    """
    lam = np.asarray(params.lam, dtype=float)
    gamma = np.asarray(params.gamma, dtype=float)
    xi = 2.0 * SQRT_PI * np.atleast_1d(np.asarray(x, dtype=float))
    eta = 2.0 * SQRT_PI * np.atleast_1d(np.asarray(y, dtype=float))
    sh = np.sinh(gamma)
    prefactor = np.prod(1.0 / np.sqrt(lam * sh))
    exponent = -0.25 * np.sum((xi ** 2 + eta ** 2) * np.tanh(gamma / 2.0) + (xi - eta) ** 2 / sh)
    return float(prefactor * math.exp(exponent))


def mehler_partial_sum(params, x: ArrayLike, y: ArrayLike, N: int) -> float:
    """sum over |alpha| <= N of lambda^alpha h_alpha(x) h_alpha(y)."""
    if N < 0:
        raise DomainError(f"mehler_partial_sum: N must be >= 0, got {N}")
    lam = np.asarray(params.lam, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    # per-coordinate series c_l[k] = lambda_l^k h_k(x_l) h_k(y_l)
    factors = []
    for l in range(lam.size):
        hx = hermite_table(N, x[l])[:, 0]
        hy = hermite_table(N, y[l])[:, 0]
        factors.append(lam[l] ** np.arange(N + 1) * hx * hy)
    # truncate to total degree <= N by convolving the per-coordinate series
    acc = factors[0]
    for f in factors[1:]:
        acc = np.convolve(acc, f)[: N + 1]
    return float(np.sum(acc))

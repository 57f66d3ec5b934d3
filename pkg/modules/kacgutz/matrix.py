# modules/kacgutz/matrix.py
"""
Matrix of the rescaled Kac-Gutzwiller operator in the Hermite basis.

For multi-indices alpha, delta with mu_i = |alpha_i - delta_i|, M_i = max, n_i = min:

    G_{alpha,delta} = lambda^alpha (1 + (-1)^{|mu|}) prod_i (beta J_i)^{mu_i/2} sqrt(n_i!/M_i!) L_{n_i}^{(mu_i)}(-beta J_i)

which is the closed form (1/sqrt(alpha! delta!)) lambda^alpha R^mu (1+(-1)^{|mu|}) (M!/mu!) Phi(mu-M, mu+1; -R^2)
rewritten through Phi(-n, mu+1; x) = n! mu!/(n+mu)! L_n^{(mu)}(x). Only even |mu| survives, so
prod_i (beta J_i)^{mu_i/2} = beta^{|mu|/2} prod_i J_i^{mu_i/2} and every entry is real for real beta.

G = diag(lambda^alpha) W with W symmetric, hence D^{-1} G D, D = diag(lambda^{alpha/2}), is symmetric.

API:
- matrix_element(params, beta, alpha, delta), matrix_element_series(...)
- assemble_matrix(params, beta, basis) -> GMatrix
- assemble_symmetric(params, beta, basis) -> ndarray
- gtrace_closed(params, beta), gtrace_partial(params, beta, N)
"""

import json
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from core.errors import DomainError
from core.model import ModelParams
from core.specialfns import (MultiIndex, confluent_phi_series, laguerre_table, log_factorials)
from core.utils import get_logger, timed
from modules.kacgutz.basis import TruncatedBasis, enumerate_basis

logger = get_logger("modules.kacgutz.matrix")


def _coordinate_table(lam_l: float, J_l: float, beta: float, N: int, with_lambda: bool = False) -> np.ndarray:
    """
    T[a, d] = |beta J_l|^{mu/2} sqrt(n!/M!) L_n^{(mu)}(-beta J_l) for a, d <= N,
    optionally times lambda_l^{(a+d)/2}. Log-space prefactor, one exponentiation per entry.
    """
    a = np.arange(N + 1)
    A, D = np.meshgrid(a, a, indexing="ij")
    mu = np.abs(A - D)
    lo = np.minimum(A, D)
    hi = np.maximum(A, D)
    x = -beta * J_l

    lag = np.empty((N + 1, N + 1))
    for m_ in range(N + 1):
        vals = laguerre_table(N - m_, m_, x)
        # L_n^{(mu)} for n = 0..N-mu
        sel = mu == m_
        lag[sel] = vals[lo[sel]]

    log_mag = 0.5 * (log_factorials(lo) - log_factorials(hi))
    if with_lambda:
        log_mag = log_mag + 0.5 * (A + D) * math.log(lam_l)
    if beta == 0.0:
        power = np.where(mu == 0, 0.0, -np.inf)
    else:
        power = 0.5 * mu * math.log(abs(beta) * J_l)
    return np.exp(log_mag + power) * lag


def _sign_pattern(mu_total: np.ndarray, beta: float) -> np.ndarray:
    """(1 + (-1)^{|mu|}) * sign(beta)^{|mu|/2}."""
    factor = np.where(mu_total % 2 == 0, 2.0, 0.0)
    if beta < 0:
        factor = factor * np.where((mu_total // 2) % 2 == 0, 1.0, -1.0)
    return factor


def _assemble(params: ModelParams, beta: float, basis: TruncatedBasis, symmetric: bool) -> np.ndarray:
    A = basis.array
    if A.size == 0:
        return np.zeros((0, 0))
    N = int(A.max())
    out = np.ones((len(basis), len(basis)))
    mu_total = np.zeros((len(basis), len(basis)), dtype=int)
    for l in range(params.m):
        table = _coordinate_table(float(params.lam[l]), float(params.J[l]), beta, N, with_lambda=symmetric)
        col = A[:, l]
        out *= table[np.ix_(col, col)]
        mu_total += np.abs(col[:, None] - col[None, :])
    out *= _sign_pattern(mu_total, beta)
    if not symmetric:
        out *= np.prod(params.lam[None, :] ** A, axis=1)[:, None]
    return out


def matrix_element(params: ModelParams, beta: float, alpha: MultiIndex, delta: MultiIndex) -> float:
    """G_{alpha,delta}; 0 whenever |alpha + delta| is odd."""
    if len(alpha) != params.m or len(delta) != params.m:
        raise DomainError("multi-index length must equal m")
    if (sum(alpha) + sum(delta)) % 2:
        return 0.0
    basis = TruncatedBasis(params.m, max(sum(alpha), sum(delta)), "both", (tuple(alpha), tuple(delta)))
    return float(_assemble(params, float(beta), basis, symmetric=False)[0, 1])


def matrix_element_series(params: ModelParams, beta: float, alpha: MultiIndex, delta: MultiIndex) -> float:
    """Same element through factorials and the terminating Phi series; for small indices only."""
    alpha = np.asarray(alpha)
    delta = np.asarray(delta)
    mu = np.abs(alpha - delta)
    M = np.maximum(alpha, delta)
    if int(mu.sum()) % 2:
        return 0.0
    value = 2.0 * float(np.prod(params.lam ** alpha))
    value /= math.sqrt(math.prod(math.factorial(int(a)) for a in alpha) * math.prod(math.factorial(int(d)) for d in delta))
    value *= float(beta) ** (int(mu.sum()) // 2) * float(np.prod(params.J ** (mu / 2.0)))
    for l in range(params.m):
        value *= math.factorial(int(M[l])) / math.factorial(int(mu[l]))
        value *= confluent_phi_series(int(M[l] - mu[l]), int(mu[l]), -float(beta) * float(params.J[l]))
    return value


@dataclass(frozen=True, eq=False)
class GMatrix:
    basis: TruncatedBasis
    entries: np.ndarray
    beta: float
    params: ModelParams

    @property
    def size(self) -> int:
        return len(self.basis)

    def trace(self) -> float:
        return float(np.trace(self.entries))

    def trace_power(self, n: int) -> float:
        return float(np.trace(np.linalg.matrix_power(self.entries, n)))

    def scaling(self) -> np.ndarray:
        """Diagonal of D = diag(lambda^{alpha/2})."""
        return np.prod(self.params.lam[None, :] ** (0.5 * self.basis.array), axis=1)

    def similarity_transform(self) -> np.ndarray:
        """D^{-1} G D, which is symmetric up to round-off."""
        d = self.scaling()
        return self.entries * d[None, :] / d[:, None]

    def symmetry_defect(self) -> float:
        S = self.similarity_transform()
        return float(np.max(np.abs(S - S.T))) if S.size else 0.0

    def symmetrized(self) -> np.ndarray:
        """Symmetric S = D W D assembled directly in log-space."""
        return _assemble(self.params, self.beta, self.basis, symmetric=True)

    def parity_blocks(self) -> Tuple[np.ndarray, np.ndarray]:
        deg = self.basis.degrees
        even = np.flatnonzero(deg % 2 == 0)
        odd = np.flatnonzero(deg % 2 == 1)
        return self.entries[np.ix_(even, even)], self.entries[np.ix_(odd, odd)]

    def to_rows(self) -> List[List[float]]:
        return self.entries.tolist()

    def to_json(self) -> str:
        return json.dumps({"beta": self.beta, "model": self.params.to_dict(),
                           "basis": [list(a) for a in self.basis.indices], "rows": self.to_rows()})


def assemble_matrix(params: ModelParams, beta: float, basis: TruncatedBasis) -> GMatrix:
    if basis.m != params.m:
        raise DomainError(f"basis built for m={basis.m}, model has m={params.m}")
    beta = float(beta)
    with timed(logger, f"assembled {len(basis)}x{len(basis)} matrix at beta={beta:g}"):
        entries = _assemble(params, beta, basis, symmetric=False)
    entries.setflags(write=False)
    return GMatrix(basis, entries, beta, params)


def assemble_symmetric(params: ModelParams, beta: float, basis: TruncatedBasis) -> np.ndarray:
    """S = D^{-1} G D on this basis without forming G first."""
    if basis.m != params.m:
        raise DomainError(f"basis built for m={basis.m}, model has m={params.m}")
    return _assemble(params, float(beta), basis, symmetric=True)


def gtrace_closed(params: ModelParams, beta: float) -> float:
    """2/prod(1-lambda_l) exp(sum_l beta J_l lambda_l/(1-lambda_l))."""
    return float(2.0 * np.exp(beta * params.coupling) / np.prod(1.0 - params.lam))


def gtrace_partial(params: ModelParams, beta: float, N: int) -> float:
    """2 sum_{|alpha| <= N} lambda^alpha prod_i L_{alpha_i}(-beta J_i)."""
    basis = enumerate_basis(params.m, N)
    A = basis.array
    terms = np.full(len(basis), 2.0)
    for l in range(params.m):
        lag = laguerre_table(N, 0, -beta * float(params.J[l]))
        terms *= params.lam[l] ** A[:, l] * lag[A[:, l]]
    return float(np.sum(terms))

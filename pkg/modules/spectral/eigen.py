# modules/spectral/eigen.py
"""
Spectrum of L_beta through the truncated Kac-Gutzwiller matrix.

Responsibilities:
- Symmetric eigensolve of S = D^{-1} G D, block by block over the parity of |alpha|.
- tail_gap diagnostic: eigenvalue movement between degrees N - tail_lookback and N.
- Degeneracy counting against the lambda = 1/2 multiplicity formulas.
- Reconstruction of eigenfunctions of L_beta from eigenvectors of S.

API:
- SpectralResult
- default_degree(m)
- eigenvalues(params, beta, N=None, with_tail=True, threads=1) -> SpectralResult
- degeneracy_count(spectrum, target, rel_tol)
- polydim(m, n), beta0_multiplicity(m, r)
- reconstruct_eigenfunction(params, beta, vector, basis) -> EntireFunctionSample
"""

import math
from dataclasses import dataclass
from math import comb
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

import config
from core.errors import DomainError, EigensolveFailure
from core.model import ModelParams
from core.specialfns import log_factorials
from core.utils import get_logger, parallel_map, timed
from modules.kacgutz.basis import TruncatedBasis, enumerate_basis
from modules.kacgutz.matrix import assemble_symmetric
from modules.ruelle.transfer import EntireFunctionSample, sample_function

logger = get_logger("modules.spectral.eigen")


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """
    Eigenvalues sorted descending with their parity labels.

    vectors[:, k] is the unit eigenvector of S for eigenvalues[k], written in
    the order of basis (the full |alpha| <= N basis).
    """
    eigenvalues: np.ndarray
    parities: Tuple[str, ...]
    N: int
    tail_gap: Optional[float]
    beta: float
    vectors: np.ndarray
    basis: TruncatedBasis

    def __len__(self) -> int:
        return self.eigenvalues.size

    @property
    def norm(self) -> float:
        """Spectral norm of S."""
        return float(np.max(np.abs(self.eigenvalues))) if self.eigenvalues.size else 0.0

    def of_parity(self, parity: str) -> np.ndarray:
        mask = np.array([p == parity for p in self.parities], dtype=bool)
        return self.eigenvalues[mask]

    def top(self, parity: Optional[str] = None, k: int = 0) -> Tuple[float, np.ndarray]:
        """(eigenvalue, eigenvector) of the k-th largest eigenvalue, optionally within one parity."""
        idx = [i for i, p in enumerate(self.parities) if parity is None or p == parity]
        if k >= len(idx):
            raise DomainError(f"only {len(idx)} eigenvalues of parity {parity!r}")
        i = idx[k]
        return float(self.eigenvalues[i]), self.vectors[:, i]

    def to_rows(self):
        return [{"index": i, "eigenvalue": float(v), "parity": p, "tail_gap": self.tail_gap}
                for i, (v, p) in enumerate(zip(self.eigenvalues, self.parities))]


def default_degree(m: int) -> int:
    return int(config.TRUNCATION.get(m, config.TRUNCATION["fallback"]))


def _solve_block(params: ModelParams, beta: float, basis: TruncatedBasis):
    if len(basis) == 0:
        return np.zeros(0), np.zeros((0, 0))
    S = assemble_symmetric(params, beta, basis)
    try:
        values, vectors = linalg.eigh(S)
    except (linalg.LinAlgError, ValueError) as exc:
        raise EigensolveFailure(f"symmetric eigensolve failed on the {basis.parity} block at beta={beta}: {exc}") from exc
    return values, vectors


def _spectrum(params: ModelParams, beta: float, N: int, threads: int):
    full = enumerate_basis(params.m, N)
    position = full.position()
    blocks = [enumerate_basis(params.m, N, p) for p in ("even", "odd")]
    solved = parallel_map(lambda b: _solve_block(params, beta, b), blocks, min(threads, 2))

    values, labels, columns = [], [], []
    for basis, (vals, vecs) in zip(blocks, solved):
        rows = np.array([position[a] for a in basis.indices], dtype=int)
        for k in range(vals.size):
            col = np.zeros(len(full))
            col[rows] = vecs[:, k]
            values.append(vals[k])
            labels.append(basis.parity)
            columns.append(col)

    order = np.argsort(-np.asarray(values), kind="stable")
    eig = np.asarray(values)[order]
    vectors = np.column_stack([columns[i] for i in order]) if columns else np.zeros((0, 0))
    return full, eig, tuple(labels[i] for i in order), vectors


def eigenvalues(params: ModelParams, beta: float, N: Optional[int] = None,
                with_tail: bool = True, threads: int = 1) -> SpectralResult:
    """
    Real spectrum of the degree-N truncation, sorted descending.

    The even and odd blocks never couple, so each is solved on its own and
    every eigenvalue inherits the label of its block.
    """
    N = default_degree(params.m) if N is None else int(N)
    if N < 2:
        raise DomainError(f"truncation degree must be >= 2, got {N}")
    beta = float(beta)
    with timed(logger, f"eigensolve m={params.m} N={N} beta={beta:g}"):
        basis, eig, labels, vectors = _spectrum(params, beta, N, threads)

    tail_gap = None
    if with_tail:
        lower = max(0, N - int(config.TRUNCATION["tail_lookback"]))
        _, previous, _, _ = _spectrum(params, beta, lower, threads)
        k = previous.size
        tail_gap = float(np.max(np.abs(eig[:k] - previous))) if k else 0.0
        logger.debug("tail_gap between N=%d and N=%d: %.3g", lower, N, tail_gap)

    eig.setflags(write=False)
    vectors.setflags(write=False)
    return SpectralResult(eig, labels, N, tail_gap, beta, vectors, basis)


def degeneracy_count(spectrum: SpectralResult, target: float, rel_tol: float = None) -> int:
    rel_tol = config.TOLERANCES["degeneracy"] if rel_tol is None else rel_tol
    if rel_tol <= 0:
        raise DomainError(f"rel_tol must be positive, got {rel_tol}")
    return int(np.count_nonzero(np.abs(spectrum.eigenvalues - target) <= rel_tol * abs(target)))


def polydim(m: int, n: int) -> int:
    """Multiplicity of e^{beta sum J} 2^{-n} in an m-channel lambda = 1/2 model."""
    if m < 1 or n < 0:
        raise DomainError(f"polydim needs m >= 1 and n >= 0, got m={m}, n={n}")
    if m == 1:
        return 1 if n == 0 else 0
    return comb(m + n - 2, n)


def beta0_multiplicity(m: int, r: int) -> int:
    """Multiplicity of 2 lambda_0^r in the beta = 0 spectrum when every lambda_l = lambda_0."""
    return comb(m + r - 1, m - 1)


# ----------------------
# Eigenfunctions
# ----------------------
def reconstruct_eigenfunction(params: ModelParams, beta: float, vector, basis: TruncatedBasis) -> EntireFunctionSample:
    """
    Polynomial F_N(z) = sum_alpha c_alpha zeta_alpha(A_0^{-1} z) with c = D^{-1} v.

    zeta_alpha(A_0^{-1} z) = (beta J)^{alpha/2} z^alpha / sqrt(alpha!), so each
    coefficient is v_alpha lambda^{-alpha/2} (beta J)^{alpha/2} / sqrt(alpha!),
    built in log-space.
    """
    if beta <= 0:
        raise DomainError(f"eigenfunction reconstruction needs beta > 0, got {beta}")
    v = np.asarray(vector, dtype=float)
    A = basis.array
    if v.size != len(basis):
        raise DomainError(f"eigenvector of length {v.size} for a basis of size {len(basis)}")
    log_scale = 0.5 * (np.log(beta * params.J) - np.log(params.lam))
    log_coef = A @ log_scale - 0.5 * np.sum(log_factorials(A), axis=1)
    keep = v != 0.0
    coef = v[keep] * np.exp(log_coef[keep])
    powers = A[keep]

    def evaluator(z: np.ndarray) -> complex:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return complex(np.dot(coef, np.prod(z[None, :] ** powers, axis=1)))

    return sample_function(params, evaluator)

# modules/kacgutz/basis.py
"""
Truncated Hermite/Fock basis: all multi-indices alpha in N_0^m with |alpha| <= N,
in graded lexicographic order, optionally restricted to one parity of |alpha|.
"""

from dataclasses import dataclass
from math import comb
from typing import Dict, Iterator, Tuple

import numpy as np

from core.errors import DomainError
from core.specialfns import MultiIndex

PARITIES = ("even", "odd", "both")


def _compositions(m: int, degree: int) -> Iterator[MultiIndex]:
    """Multi-indices of exactly this total degree, lexicographically descending."""
    if m == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _compositions(m - 1, degree - first):
            yield (first,) + rest


@dataclass(frozen=True)
class TruncatedBasis:
    m: int
    N: int
    parity: str
    indices: Tuple[MultiIndex, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([sum(a) for a in self.indices], dtype=int)

    @property
    def array(self) -> np.ndarray:
        """(size, m) integer array of the indices."""
        return np.array(self.indices, dtype=int).reshape(len(self.indices), self.m)

    def position(self) -> Dict[MultiIndex, int]:
        return {a: i for i, a in enumerate(self.indices)}


def enumerate_basis(m: int, N: int, parity: str = "both") -> TruncatedBasis:
    """
    Graded lexicographic enumeration of {alpha : |alpha| <= N}.

    Size is C(m+N, m) for parity 'both'.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    if parity not in PARITIES:
        raise DomainError(f"parity must be one of {PARITIES}, got {parity!r}")
    indices = []
    for d in range(N + 1):
        if parity == "even" and d % 2:
            continue
        if parity == "odd" and not d % 2:
            continue
        indices.extend(_compositions(m, d))
    basis = TruncatedBasis(m, N, parity, tuple(indices))
    if parity == "both":
        assert len(basis) == comb(m + N, m)
    return basis

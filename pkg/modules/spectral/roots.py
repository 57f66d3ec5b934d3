# modules/spectral/roots.py
"""
Real zeros and poles of zeta_R(z, .) on a beta interval.

d_alpha(beta) = det(1 - z lambda^alpha L_beta) vanishes exactly when some
z lambda^alpha rho_k(beta) crosses 1. The scan counts, at every grid point,
how many scaled eigenvalues lie above 1; wherever that count changes, the
k-th largest scaled eigenvalue minus 1 changes sign and is refined by
bisection. Counting also catches degenerate pairs crossing together, which
leave the sign of d_alpha unchanged.

Roots of even |alpha| factors are poles, of odd |alpha| factors zeros.
Coincident roots of different factors are reported separately.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

import config
from core.errors import DomainError
from core.model import ModelParams
from core.specialfns import MultiIndex, binary_indices, lambda_power
from core.utils import get_logger, parallel_map, timed
from modules.spectral.eigen import default_degree, eigenvalues

logger = get_logger("modules.spectral.roots")

# roots of the same factor closer than this are one root of higher multiplicity
MERGE_TOL = 1e-9


@dataclass(frozen=True)
class RootRecord:
    beta: float
    alpha: MultiIndex
    kind: str
    factor_value: complex
    multiplicity: int = 1

    def to_dict(self) -> dict:
        return {"beta": self.beta, "alpha": list(self.alpha), "kind": self.kind,
                "factor_value": self.factor_value, "multiplicity": self.multiplicity}


def _kind(alpha: MultiIndex) -> str:
    return "pole" if sum(alpha) % 2 == 0 else "zero"


def beta_grid(beta_range: Tuple[float, float], grid_step: float) -> np.ndarray:
    lo, hi = float(beta_range[0]), float(beta_range[1])
    if grid_step <= 0:
        raise DomainError(f"grid_step must be positive, got {grid_step}")
    if hi < lo:
        return np.zeros(0)
    count = int(np.floor((hi - lo) / grid_step + 1e-9)) + 1
    grid = lo + grid_step * np.arange(count)
    if grid[-1] < hi - 1e-12:
        grid = np.append(grid, hi)
    return grid


def find_real_zeros_poles(params: ModelParams, z: float = 1.0, beta_range: Tuple[float, float] = (0.0, 2.0),
                          N: Optional[int] = None, grid_step: float = 0.05, threads: int = 1) -> List[RootRecord]:
    z = float(z)
    N = default_degree(params.m) if N is None else int(N)
    grid = beta_grid(beta_range, grid_step)
    if grid.size < 2 or z == 0.0:
        return []
    xtol = config.TOLERANCES["bisect_xtol"]

    solved = {}

    def spectrum(beta: float) -> np.ndarray:
        # factors sharing lambda^alpha bisect along the same points
        if beta not in solved:
            solved[beta] = np.asarray(eigenvalues(params, beta, N, with_tail=False).eigenvalues)
        return solved[beta]

    with timed(logger, f"root scan over {grid.size} grid points"):
        spectra = parallel_map(lambda b: np.asarray(eigenvalues(params, b, N, with_tail=False).eigenvalues),
                               list(grid), threads)
    solved.update(zip((float(b) for b in grid), spectra))

    roots: List[RootRecord] = []
    for alpha in binary_indices(params.m):
        scale = z * lambda_power(params.lam, alpha)

        def scaled(beta: float, rho: np.ndarray = None) -> np.ndarray:
            rho = spectrum(beta) if rho is None else rho
            return np.sort(scale * rho)[::-1]

        counts = [int(np.count_nonzero(scaled(b, s) > 1.0)) for b, s in zip(grid, spectra)]
        found = []
        for i in range(grid.size - 1):
            if counts[i] == counts[i + 1]:
                continue
            a, b = float(grid[i]), float(grid[i + 1])
            for k in range(min(counts[i], counts[i + 1]), max(counts[i], counts[i + 1])):
                def h(beta: float, k: int = k) -> float:
                    return float(scaled(beta)[k] - 1.0)
                found.append(optimize.bisect(h, a, b, xtol=xtol))

        for beta_star in sorted(found):
            if roots and roots[-1].alpha == alpha and abs(roots[-1].beta - beta_star) < MERGE_TOL:
                prev = roots.pop()
                roots.append(RootRecord(prev.beta, alpha, prev.kind, prev.factor_value, prev.multiplicity + 1))
                continue
            value = complex(np.prod(1.0 - scale * spectrum(beta_star)))
            roots.append(RootRecord(float(beta_star), alpha, _kind(alpha), value))
            logger.info("%s of factor alpha=%s at beta=%.12f", _kind(alpha), list(alpha), beta_star)
    return roots

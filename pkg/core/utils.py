# core/utils.py
"""
Utility helpers: logger factory, compensated summation, residual sample points,
worker-pool map and timing.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Iterable, Iterator, List, Sequence, TypeVar

import numpy as np

import config

T = TypeVar("T")
R = TypeVar("R")


def get_logger(name: str) -> logging.Logger:
    """Named logger with the project's stream format, attached once."""
    logger = logging.getLogger(name)
    logger.setLevel(config.LOGGING["level"])
    if not logger.handlers:
        fmt = logging.Formatter("[%(asctime)s] %(levelname)s %(message)s")
        ch = logging.StreamHandler()
        ch.setFormatter(fmt)
        logger.addHandler(ch)
        if config.LOGGING["log_to_file"]:
            path = Path(config.LOGGING["filename"])
            path.parent.mkdir(parents=True, exist_ok=True)
            fh = logging.FileHandler(path)
            fh.setFormatter(fmt)
            logger.addHandler(fh)
    return logger


logger = get_logger("core.utils")


class CompensatedSum:
    """
    Kahan-Babuska (Neumaier) accumulator for real or complex terms.

    Real and imaginary parts are compensated independently.
    """

    def __init__(self):
        self._re = 0.0
        self._re_c = 0.0
        self._im = 0.0
        self._im_c = 0.0

    @staticmethod
    def _step(total: float, comp: float, term: float):
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        return t, comp

    def add(self, term: complex) -> "CompensatedSum":
        term = complex(term)
        self._re, self._re_c = self._step(self._re, self._re_c, term.real)
        self._im, self._im_c = self._step(self._im, self._im_c, term.imag)
        return self

    def extend(self, terms: Iterable[complex]) -> "CompensatedSum":
        for t in terms:
            self.add(t)
        return self

    @property
    def value(self) -> complex:
        return complex(self._re + self._re_c, self._im + self._im_c)


def exact_sum(values: np.ndarray) -> complex:
    """Correctly rounded sum of a real or complex array (math.fsum per component)."""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))
    return complex(math.fsum(values.tolist()), 0.0)


def sample_points(m: int, radius: float, count: int = None, seed: int = None) -> np.ndarray:
    """
    Deterministic complex sample points in the closed polydisc of the given radius.

    Returns an array of shape (count, m).
    """
    count = config.SAMPLING["points"] if count is None else count
    seed = config.SAMPLING["seed"] if seed is None else seed
    rng = np.random.default_rng(seed)
    modulus = radius * np.sqrt(rng.uniform(0.0, 1.0, size=(count, m)))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=(count, m))
    return modulus * np.exp(1j * angle)


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """
    Map fn over items, optionally on a thread pool.

    Results always come back in input order, so reductions over them are
    independent of the worker count.
    """
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@contextmanager
def timed(log: logging.Logger, what: str, level: int = logging.DEBUG) -> Iterator[None]:
    start = time.time()
    yield
    log.log(level, "%s (%.2fs)", what, time.time() - start)

# core/errors.py
"""
Exception hierarchy shared by the library and the command line.

Every error carries the process exit code the CLI maps it to:
  1 verification failure, 2 input validation, 3 resource cap, 4 numerical failure.
"""

from typing import Optional, Tuple


class KacZetaError(Exception):
    exit_code = 4


class DomainError(KacZetaError, ValueError):
    """Parameter or argument outside the admissible range."""
    exit_code = 2


class ConvergenceDomain(KacZetaError, ValueError):
    """Series evaluation requested outside its disc of convergence."""
    exit_code = 2


class CapExceeded(KacZetaError):
    """Configuration enumeration beyond the 2^n cap."""
    exit_code = 3


class QuadratureFailure(KacZetaError):
    exit_code = 4


class EigensolveFailure(KacZetaError):
    exit_code = 4


class PoleAt(KacZetaError):
    """A denominator Fredholm determinant vanishes at (beta, z)."""
    exit_code = 4

    def __init__(self, beta: complex, z: complex, alpha: Optional[Tuple[int, ...]] = None, message: str = ""):
        self.beta = beta
        self.z = z
        self.alpha = alpha
        super().__init__(message or f"pole at beta={beta!r}, z={z!r}, alpha={alpha}")


class VerificationFailed(KacZetaError):
    exit_code = 1


class ConvergenceWarning(UserWarning):
    """Truncated determinants still drifting between degrees N-4 and N."""


class SchemaViolation(KacZetaError):
    """An emitted JSON document does not match the shipped output schema."""
    exit_code = 4

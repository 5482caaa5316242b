"""Shared validation primitives and the exception hierarchy.

This module holds low-level helpers and the canonical exception classes so
that the numerical modules (``linalg_core``, ``rotor_operators``,
``continuum_analytic``, ``states``, ``spectral_scan``) and the command-line
layer can import them without circular dependencies.

Input problems derive from :class:`ValueError`; failures of a numerical
procedure on valid input derive from :class:`NumericalError`, a
:class:`RuntimeError`.
"""

from __future__ import annotations

import math


class ConfigValidationError(ValueError):
    """Raised when a run configuration or CLI input fails validation."""


class OperatorError(ValueError):
    """Base class for invalid operator or state inputs."""


class OperatorSizeError(OperatorError):
    """Raised when an operator would exceed the configured size ceiling."""


class ShapeError(OperatorError):
    """Raised when operand dimensions do not match."""


class NormalizationError(OperatorError):
    """Raised when a state vector is not normalized."""


class InvalidDensityError(OperatorError):
    """Raised when a density operator is not unit-trace and positive."""


class InvalidObservableError(OperatorError):
    """Raised when Fourier coefficients do not define a Hermitian observable."""


class DomainError(ValueError):
    """Raised when a continuum parameter lies outside its domain."""


class ProfileError(DomainError):
    """Raised when a wave-packet profile is not L2-normalized."""


class NumericalError(RuntimeError):
    """Base class for failures of a numerical procedure."""


class EigensolverError(NumericalError):
    """Raised when the Hermitian eigensolver does not converge.

    Attributes
    ----------
    dim
        Dimension of the operator that failed.
    condition
        Ratio of the largest to smallest singular value, or ``inf``.

    """

    def __init__(self, message: str, *, dim: int, condition: float) -> None:
        super().__init__(f"{message} (dim={dim}, condition={condition:.3e})")
        self.dim = dim
        self.condition = condition


class IntegrationError(NumericalError):
    """Raised when panel doubling fails to reach the requested tolerance.

    Attributes
    ----------
    estimates
        The last two estimates produced before giving up.

    """

    def __init__(self, message: str, *, estimates: tuple[float, float]) -> None:
        previous, last = estimates
        super().__init__(f"{message} (last estimates {previous!r}, {last!r})")
        self.estimates = estimates


def _require_positive_int(value: object, label: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
        msg = f"{label} must be a positive integer"
        raise ConfigValidationError(msg)
    return value


def _require_finite(value: object, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float):
        msg = f"{label} must be a real number"
        raise ConfigValidationError(msg)
    number = float(value)
    if not math.isfinite(number):
        msg = f"{label} must be finite"
        raise ConfigValidationError(msg)
    return number


def _require_in_range(
    value: float,
    label: str,
    *,
    bounds: tuple[float, float],
) -> float:
    low, high = bounds
    if not low <= value <= high:
        msg = f"{label} must lie in [{low}, {high}], got {value!r}"
        raise ConfigValidationError(msg)
    return value


__all__ = [
    "ConfigValidationError",
    "DomainError",
    "EigensolverError",
    "IntegrationError",
    "InvalidDensityError",
    "InvalidObservableError",
    "NormalizationError",
    "NumericalError",
    "OperatorError",
    "OperatorSizeError",
    "ProfileError",
    "ShapeError",
]

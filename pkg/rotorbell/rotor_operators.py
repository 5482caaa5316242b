"""Rotor observables in the truncated angular-momentum basis.

The basis ``|m>`` for ``|m| <= M`` is stored with row ``r = m + M``, so row 0
is ``m = -M``. The cosine observable is tridiagonal with entries ``1/2``;
its phase-rotated form carries ``e^{i(2m+1)xi}`` on the upper diagonal.
Bipartite operators put party A on the slow tensor axis.

A sum over all ``|m| <= M`` would couple ``|M>`` to ``|M+1>``,
which lies outside the declared space; that boundary term is dropped so
every operator closes on ``2M + 1`` states.

Examples
--------
>>> from rotorbell.rotor_operators import reduced_bell_operator
>>> import numpy as np
>>> operator = reduced_bell_operator(2, np.pi / 2, np.pi / 2)
>>> operator.dim
25
"""

from __future__ import annotations

import dataclasses as dc
import math
import typing as typ

import numpy as np
import scipy.linalg

from ._validation_helpers import (
    DomainError,
    InvalidObservableError,
    OperatorSizeError,
)
from .config import DEFAULT_MAX_PRODUCT_DIM, MAX_TRUNCATION
from .linalg_core import (
    ComplexMatrix,
    HermitianOperator,
    tensor_expectation,
    tensor_product,
)

if typ.TYPE_CHECKING:
    import collections.abc as cabc

    import numpy.typing as npt

TWO_PI = 2.0 * math.pi
CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
_COEFFICIENT_TOLERANCE = 1e-12


@dc.dataclass(frozen=True, slots=True)
class TruncationLevel:
    """Truncation order ``M`` of the angular-momentum basis.

    Attributes
    ----------
    order
        The cut-off ``M``; the basis is ``|m>`` for ``-M <= m <= M``.
    ceiling
        Largest accepted order.

    """

    order: int
    ceiling: int = MAX_TRUNCATION

    def __post_init__(self) -> None:
        """Validate the order against the ceiling."""
        if isinstance(self.order, bool) or not isinstance(self.order, int):
            msg = f"Truncation order must be an integer, got {self.order!r}"
            raise DomainError(msg)
        if self.order < 1:
            msg = f"Truncation order must be at least 1, got {self.order}"
            raise DomainError(msg)
        if self.order > self.ceiling:
            msg = f"Truncation order {self.order} exceeds the ceiling {self.ceiling}"
            raise OperatorSizeError(msg)

    @classmethod
    def coerce(cls, value: int | TruncationLevel) -> TruncationLevel:
        """Return ``value`` as a truncation level."""
        return value if isinstance(value, TruncationLevel) else cls(value)

    @property
    def dim(self) -> int:
        """Local dimension ``2M + 1``."""
        return 2 * self.order + 1

    @property
    def m_values(self) -> np.ndarray:
        """Angular-momentum quantum numbers in row order."""
        return np.arange(-self.order, self.order + 1)

    def row_of(self, m: int) -> int:
        """Return the row index holding ``|m>``."""
        if abs(m) > self.order:
            msg = f"|m| = {abs(m)} exceeds the truncation order {self.order}"
            raise DomainError(msg)
        return m + self.order

    def m_of(self, row: int) -> int:
        """Return the quantum number stored in ``row``."""
        if not 0 <= row < self.dim:
            msg = f"Row {row} outside [0, {self.dim})"
            raise DomainError(msg)
        return row - self.order


@dc.dataclass(frozen=True, slots=True)
class PhaseAngle:
    """Measurement phase in radians, stored reduced to ``[0, 2pi)``."""

    value: float

    def __post_init__(self) -> None:
        """Reject non-finite input and reduce modulo ``2pi``."""
        raw = float(self.value)
        if not math.isfinite(raw):
            msg = f"Phase must be finite, got {self.value!r}"
            raise DomainError(msg)
        reduced = math.fmod(raw, TWO_PI)
        if reduced < 0.0:
            reduced += TWO_PI
        if reduced >= TWO_PI:
            reduced = 0.0
        object.__setattr__(self, "value", reduced)

    @classmethod
    def coerce(cls, value: float | PhaseAngle) -> PhaseAngle:
        """Return ``value`` as a phase angle."""
        return value if isinstance(value, PhaseAngle) else cls(value)


type PhaseLike = float | PhaseAngle
type TruncationLike = int | TruncationLevel


@dc.dataclass(frozen=True, slots=True, eq=False)
class TensorTerm:
    """One weighted product ``weight * left (x) right`` of a Bell operator."""

    weight: float
    left: HermitianOperator
    right: HermitianOperator


def _rotated_cosine_matrix(level: TruncationLevel, xi: float) -> np.ndarray:
    m = np.arange(-level.order, level.order)
    upper = 0.5 * np.exp(1j * (2 * m + 1) * xi)
    return np.diag(upper, 1) + np.diag(upper.conj(), -1)


def cosine_observable(truncation: TruncationLike) -> HermitianOperator:
    """Return ``C^(M)``, the truncated position projection ``cos theta``.

    Entries are ``1/2`` at ``(m, m+1)`` and ``(m+1, m)`` for
    ``m = -M ... M-1``. Its eigenvalues are ``cos(k pi / (2M + 2))``,
    ``k = 1 ... 2M + 1``.
    """
    level = TruncationLevel.coerce(truncation)
    return HermitianOperator(_rotated_cosine_matrix(level, 0.0))


def phase_rotated_cosine(
    truncation: TruncationLike, xi: PhaseLike
) -> HermitianOperator:
    """Return ``C^(M)(xi)``.

    The upper diagonal carries ``(1/2) e^{i(2m+1)xi}`` and the lower one its
    conjugate. Because ``2m + 1`` is odd, ``C(xi + pi) = -C(xi)``; the
    spectrum does not depend on ``xi``.
    """
    level = TruncationLevel.coerce(truncation)
    phase = PhaseAngle.coerce(xi)
    return HermitianOperator(_rotated_cosine_matrix(level, phase.value))


def kinetic_phase_unitary(truncation: TruncationLike, phi: PhaseLike) -> ComplexMatrix:
    """Return the diagonal free-rotor propagator ``U(phi) = e^{i J_z^2 phi}``.

    With these conventions ``U(phi)^H C U(phi)`` equals
    ``phase_rotated_cosine(M, phi)``.
    """
    level = TruncationLevel.coerce(truncation)
    phase = PhaseAngle.coerce(phi)
    m = level.m_values
    return ComplexMatrix(np.diag(np.exp(1j * (m * m) * phase.value)))


def fourier_coefficients(
    f: cabc.Callable[[np.ndarray], npt.ArrayLike],
    max_order: int,
    samples: int | None = None,
) -> dict[int, complex]:
    """Sample a ``2pi``-periodic function and return its Fourier coefficients.

    Uses ``c_k = (1/N) sum_j f(theta_j) e^{i k theta_j}`` on the uniform grid
    ``theta_j = -pi + 2 pi j / N``, which is exact for trigonometric
    polynomials of degree below ``N / 2``.

    Parameters
    ----------
    f
        Vectorized function of the angle.
    max_order
        Largest ``|k|`` to return.
    samples
        Grid size ``N``; defaults to ``4 * max_order + 4``.

    Returns
    -------
    dict[int, complex]
        Mapping ``k -> c_k`` for ``|k| <= max_order``.

    """
    if max_order < 0:
        msg = f"max_order must be non-negative, got {max_order}"
        raise DomainError(msg)
    count = 4 * max_order + 4 if samples is None else samples
    if count <= 2 * max_order:
        msg = f"{count} samples cannot resolve order {max_order}"
        raise DomainError(msg)
    theta = -math.pi + TWO_PI * np.arange(count) / count
    values = np.asarray(f(theta), dtype=np.complex128)
    # ifft gives (1/N) sum_j x_j e^{2 pi i j k / N}; the grid offset -pi adds (-1)^k.
    spectrum = np.fft.ifft(values)
    return {
        k: complex((-1) ** abs(k) * spectrum[k % count])
        for k in range(-max_order, max_order + 1)
    }


def periodic_observable(
    truncation: TruncationLike,
    fourier_coeffs: cabc.Mapping[int, complex],
) -> HermitianOperator:
    """Return the truncated multiplication operator of a periodic function.

    ``entry(m, m') = c_{m - m'}`` with ``c_k = (1/2pi) int f e^{ik theta}``.
    Missing coefficients are zero; orders beyond ``2M`` cannot appear in the
    truncated matrix and are ignored.

    Raises
    ------
    InvalidObservableError
        If ``c_{-k} != conj(c_k)`` for some ``k``, i.e. ``f`` is not real.

    """
    level = TruncationLevel.coerce(truncation)
    coeffs = {int(k): complex(v) for k, v in fourier_coeffs.items()}
    for k, value in coeffs.items():
        mirror = coeffs.get(-k, 0j)
        if abs(mirror - value.conjugate()) > _COEFFICIENT_TOLERANCE:
            msg = f"Fourier coefficients violate c_-k = conj(c_k) at k={k}"
            raise InvalidObservableError(msg)
    span = np.arange(level.dim)
    column = np.array([coeffs.get(int(k), 0j) for k in span])
    row = np.array([coeffs.get(-int(k), 0j) for k in span])
    return HermitianOperator(scipy.linalg.toeplitz(column, row))


def bell_terms(
    truncation: TruncationLike,
    phases: tuple[PhaseLike, PhaseLike, PhaseLike, PhaseLike],
) -> tuple[TensorTerm, ...]:
    """Return the four CHSH products for ``(phi_a, phi_a', phi_b, phi_b')``.

    The combination is
    ``C(a) C(b) + C(a') C(b) + C(a) C(b') - C(a') C(b')``.
    """
    phi_a, phi_a_prime, phi_b, phi_b_prime = (
        phase_rotated_cosine(truncation, phase) for phase in phases
    )
    return (
        TensorTerm(1.0, phi_a, phi_b),
        TensorTerm(1.0, phi_a_prime, phi_b),
        TensorTerm(1.0, phi_a, phi_b_prime),
        TensorTerm(-1.0, phi_a_prime, phi_b_prime),
    )


def bell_operator(
    truncation: TruncationLike,
    phases: tuple[PhaseLike, PhaseLike, PhaseLike, PhaseLike],
    *,
    max_dim: int = DEFAULT_MAX_PRODUCT_DIM,
) -> HermitianOperator:
    """Return the dense bipartite Bell operator for four measurement phases.

    Parameters
    ----------
    truncation
        Truncation order shared by both parties.
    phases
        ``(phi_a, phi_a', phi_b, phi_b')`` in radians.
    max_dim
        Ceiling on the bipartite dimension ``(2M + 1)^2``.

    Raises
    ------
    OperatorSizeError
        If ``(2M + 1)^2`` exceeds ``max_dim``.

    """
    terms = bell_terms(truncation, phases)
    total = None
    for term in terms:
        product = tensor_product(term.left, term.right, max_dim=max_dim).matrix
        weighted = term.weight * product
        total = weighted if total is None else total + weighted
    return HermitianOperator(total)


def reduced_bell_operator(
    truncation: TruncationLike,
    xi_a: PhaseLike,
    xi_b: PhaseLike,
    *,
    max_dim: int = DEFAULT_MAX_PRODUCT_DIM,
) -> HermitianOperator:
    """Return ``B^(M)(xi_a, xi_b)``, the Bell operator at phases ``(0, xi_a, 0, xi_b)``.

    Every four-phase operator is unitarily equivalent to this one with
    ``xi_a = phi_a' - phi_a`` and ``xi_b = phi_b' - phi_b``.
    """
    return bell_operator(truncation, (0.0, xi_a, 0.0, xi_b), max_dim=max_dim)


def bell_expectation(
    truncation: TruncationLike,
    xi_a: PhaseLike,
    xi_b: PhaseLike,
    psi: npt.ArrayLike,
) -> float:
    """Return ``<psi|B^(M)(xi_a, xi_b)|psi>`` term by term.

    The dense operator is never formed, so this works far above the tensor
    product ceiling.
    """
    terms = bell_terms(truncation, (0.0, xi_a, 0.0, xi_b))
    return math.fsum(
        term.weight * tensor_expectation(term.left, term.right, psi) for term in terms
    )


__all__ = [
    "CLASSICAL_BOUND",
    "TSIRELSON_BOUND",
    "TWO_PI",
    "PhaseAngle",
    "PhaseLike",
    "TensorTerm",
    "TruncationLevel",
    "TruncationLike",
    "bell_expectation",
    "bell_operator",
    "bell_terms",
    "cosine_observable",
    "fourier_coefficients",
    "kinetic_phase_unitary",
    "periodic_observable",
    "phase_rotated_cosine",
    "reduced_bell_operator",
]

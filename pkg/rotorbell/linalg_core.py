"""Dense complex matrix algebra and the Hermitian eigensystem contract.

Every operator in rotorbell is stored as a dense ``complex128`` array wrapped
in an immutable value type. :class:`HermitianOperator` symmetrizes its input
on construction, so Hermiticity holds exactly rather than to a tolerance.

Examples
--------
>>> import numpy as np
>>> from rotorbell.linalg_core import HermitianOperator, hermitian_eigensystem
>>> sigma_x = HermitianOperator(np.array([[0, 1], [1, 0]]))
>>> bool(np.allclose(hermitian_eigensystem(sigma_x).eigenvalues, [-1.0, 1.0]))
True
"""

from __future__ import annotations

import dataclasses as dc
import logging
import typing as typ

import numpy as np
import scipy.linalg

from ._validation_helpers import (
    EigensolverError,
    InvalidDensityError,
    NormalizationError,
    NumericalError,
    OperatorSizeError,
    ShapeError,
)
from .config import (
    DEFAULT_MAX_PRODUCT_DIM,
    DENSITY_TOLERANCE,
    EIGENSYSTEM_TOLERANCE,
    NORMALIZATION_TOLERANCE,
)

if typ.TYPE_CHECKING:
    import collections.abc as cabc

    import numpy.typing as npt

logger = logging.getLogger(__name__)

_IMAGINARY_RESIDUE = 1e-12


def _frozen_array(values: npt.ArrayLike, dtype: type) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


def _require_square(matrix: np.ndarray, label: str) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or not matrix.size:
        msg = f"{label} must be a non-empty square matrix, got shape {matrix.shape}"
        raise ShapeError(msg)


def _require_finite(matrix: np.ndarray, label: str) -> None:
    if not np.all(np.isfinite(matrix)):
        msg = f"{label} contains NaN or infinite entries"
        raise ShapeError(msg)


@dc.dataclass(frozen=True, slots=True, eq=False)
class ComplexMatrix:
    """Dense complex matrix with finite entries.

    Attributes
    ----------
    matrix
        Read-only ``complex128`` array of shape ``(dim_rows, dim_cols)``.

    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        """Copy, validate and freeze the entries."""
        matrix = np.array(self.matrix, dtype=np.complex128, copy=True)
        if matrix.ndim != 2 or not matrix.size:
            msg = f"ComplexMatrix must be a non-empty 2-D array, got {matrix.shape}"
            raise ShapeError(msg)
        _require_finite(matrix, "ComplexMatrix")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim_rows(self) -> int:
        """Number of rows."""
        return int(self.matrix.shape[0])

    @property
    def dim_cols(self) -> int:
        """Number of columns."""
        return int(self.matrix.shape[1])


@dc.dataclass(frozen=True, slots=True, eq=False)
class HermitianOperator:
    """Dense Hermitian operator.

    The constructor replaces the input ``A`` by ``(A + A^H) / 2`` and zeroes
    the imaginary part of the diagonal, so ``entry(i, j)`` equals
    ``conj(entry(j, i))`` bit for bit. Inputs that are already exactly
    Hermitian pass through unchanged.

    Attributes
    ----------
    matrix
        Read-only ``complex128`` array of shape ``(dim, dim)``.

    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        """Copy, symmetrize and freeze the entries."""
        raw = np.array(self.matrix, dtype=np.complex128, copy=True)
        _require_square(raw, "HermitianOperator")
        _require_finite(raw, "HermitianOperator")
        matrix = (raw + raw.conj().T) / 2
        np.fill_diagonal(matrix, matrix.diagonal().real)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def strict(
        cls, matrix: npt.ArrayLike, *, atol: float = EIGENSYSTEM_TOLERANCE
    ) -> HermitianOperator:
        """Build an operator, rejecting inputs that are not Hermitian.

        Raises
        ------
        ShapeError
            If ``max|A - A^H|`` exceeds ``atol``.

        """
        raw = np.asarray(matrix, dtype=np.complex128)
        _require_square(raw, "HermitianOperator")
        deviation = float(np.max(np.abs(raw - raw.conj().T)))
        if deviation > atol:
            msg = f"Matrix is not Hermitian: max|A - A^H| = {deviation:.3e}"
            raise ShapeError(msg)
        return cls(raw)

    @property
    def dim(self) -> int:
        """Dimension of the underlying space."""
        return int(self.matrix.shape[0])

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        """Return the sum of two operators of equal dimension."""
        _require_same_dim(self, other)
        return HermitianOperator(self.matrix + other.matrix)

    def __sub__(self, other: HermitianOperator) -> HermitianOperator:
        """Return the difference of two operators of equal dimension."""
        _require_same_dim(self, other)
        return HermitianOperator(self.matrix - other.matrix)

    def __neg__(self) -> HermitianOperator:
        """Return the negated operator."""
        return HermitianOperator(-self.matrix)

    def scaled(self, factor: float) -> HermitianOperator:
        """Return the operator multiplied by a real factor."""
        return HermitianOperator(float(factor) * self.matrix)


def _require_same_dim(left: HermitianOperator, right: HermitianOperator) -> None:
    if left.dim != right.dim:
        msg = f"Operator dimensions differ: {left.dim} != {right.dim}"
        raise ShapeError(msg)


@dc.dataclass(frozen=True, slots=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in ascending order with aligned orthonormal eigenvectors.

    Attributes
    ----------
    eigenvalues
        Read-only real array, ascending.
    eigenvectors
        Read-only complex array whose column ``k`` pairs with
        ``eigenvalues[k]``.

    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def largest(self) -> float:
        """Return the top eigenvalue."""
        return float(self.eigenvalues[-1])

    def projector(self, indices: cabc.Sequence[int]) -> np.ndarray:
        """Return the orthogonal projector onto the selected eigenvectors.

        Projectors are the basis-independent way to compare degenerate
        eigenspaces.
        """
        columns = self.eigenvectors[:, list(indices)]
        return columns @ columns.conj().T

    def reconstruct(self) -> np.ndarray:
        """Return ``sum_k lambda_k |v_k><v_k|``."""
        vectors = self.eigenvectors
        return (vectors * self.eigenvalues) @ vectors.conj().T


def _condition_number(matrix: np.ndarray) -> float:
    try:
        return float(np.linalg.cond(matrix))
    except np.linalg.LinAlgError:
        return float("inf")


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    # First component of largest modulus becomes real and non-negative.
    pivot_rows = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[pivot_rows, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivots) / pivots).reshape(1, -1)


def tensor_product(
    a: HermitianOperator,
    b: HermitianOperator,
    *,
    max_dim: int = DEFAULT_MAX_PRODUCT_DIM,
) -> HermitianOperator:
    """Return the Kronecker product ``a (x) b``.

    The left factor indexes the slow axis: the entry at row ``(i, k)`` and
    column ``(j, l)`` sits at ``(i * dim(b) + k, j * dim(b) + l)`` and equals
    ``a[i, j] * b[k, l]``.

    Parameters
    ----------
    a, b
        The factors.
    max_dim
        Ceiling on the product dimension.

    Returns
    -------
    HermitianOperator
        Operator of dimension ``dim(a) * dim(b)``.

    Raises
    ------
    OperatorSizeError
        If the product dimension exceeds ``max_dim``.

    """
    product_dim = a.dim * b.dim
    if product_dim > max_dim:
        msg = (
            f"Tensor product dimension {product_dim} exceeds the ceiling "
            f"{max_dim}"
        )
        raise OperatorSizeError(msg)
    return HermitianOperator(np.kron(a.matrix, b.matrix))


def hermitian_eigensystem(h: HermitianOperator) -> SpectralDecomposition:
    """Diagonalize a Hermitian operator.

    Eigenvalues are ascending. Eigenvectors are orthonormal columns, each
    rescaled by a unit phase so that its first component of largest modulus
    is real and non-negative; degenerate eigenspaces are only meaningful
    through :meth:`SpectralDecomposition.projector`.

    Raises
    ------
    EigensolverError
        If LAPACK fails to converge or the residual check fails.

    """
    try:
        values, vectors = scipy.linalg.eigh(h.matrix)
    except (np.linalg.LinAlgError, ValueError) as exc:
        logger.debug("eigh failed for dim %d", h.dim, exc_info=True)
        msg = "Hermitian eigensolver did not converge"
        raise EigensolverError(
            msg, dim=h.dim, condition=_condition_number(h.matrix)
        ) from exc

    vectors = _fix_phases(vectors)
    scale = float(np.max(np.abs(values)))
    residuals = np.linalg.norm(h.matrix @ vectors - vectors * values, axis=0)
    worst = float(np.max(residuals))
    if worst > EIGENSYSTEM_TOLERANCE * max(scale, 1.0):
        msg = f"Eigenpair residual {worst:.3e} exceeds tolerance"
        raise EigensolverError(
            msg, dim=h.dim, condition=_condition_number(h.matrix)
        )
    return SpectralDecomposition(
        eigenvalues=_frozen_array(values, np.float64),
        eigenvectors=_frozen_array(vectors, np.complex128),
    )


def largest_eigenvalue(h: HermitianOperator) -> float:
    """Return the top eigenvalue from the full dense eigenvalue list.

    Raises
    ------
    EigensolverError
        If LAPACK fails to converge.

    """
    try:
        values = scipy.linalg.eigvalsh(h.matrix)
    except (np.linalg.LinAlgError, ValueError) as exc:
        msg = "Hermitian eigenvalue solver did not converge"
        raise EigensolverError(
            msg, dim=h.dim, condition=_condition_number(h.matrix)
        ) from exc
    return float(values[-1])


def _as_state(psi: npt.ArrayLike, dim: int) -> np.ndarray:
    vector = np.asarray(psi, dtype=np.complex128)
    if vector.ndim != 1 or vector.shape[0] != dim:
        msg = f"State of shape {vector.shape} does not match dimension {dim}"
        raise ShapeError(msg)
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
        msg = f"State is not normalized: norm = {norm!r}"
        raise NormalizationError(msg)
    return vector


def _real_part(value: complex, label: str) -> float:
    if abs(value.imag) >= _IMAGINARY_RESIDUE:
        msg = f"{label} has imaginary residue {value.imag:.3e}"
        raise NumericalError(msg)
    return float(value.real)


def expectation(h: HermitianOperator, psi: npt.ArrayLike) -> float:
    """Return ``<psi|H|psi>`` for a unit vector ``psi``.

    Raises
    ------
    ShapeError
        If ``psi`` does not match ``h``.
    NormalizationError
        If ``psi`` is not normalized to within ``1e-12``.

    """
    vector = _as_state(psi, h.dim)
    return _real_part(np.vdot(vector, h.matrix @ vector), "Expectation")


def tensor_expectation(
    a: HermitianOperator, b: HermitianOperator, psi: npt.ArrayLike
) -> float:
    """Return ``<psi|a (x) b|psi>`` without forming the Kronecker product.

    ``psi`` uses the same slow-left layout as :func:`tensor_product`, so it
    reshapes to a ``dim(a) x dim(b)`` coefficient matrix ``P`` and the value
    is ``Tr(P^H a P b^T)``.
    """
    vector = _as_state(psi, a.dim * b.dim)
    coefficients = vector.reshape(a.dim, b.dim)
    image = a.matrix @ coefficients @ b.matrix.T
    return _real_part(np.vdot(coefficients, image), "Tensor expectation")


def trace_product(h: HermitianOperator, rho: HermitianOperator) -> float:
    """Return ``Tr(H rho)`` for a density operator ``rho``.

    Raises
    ------
    ShapeError
        If the dimensions differ.
    InvalidDensityError
        If ``rho`` does not have unit trace or has an eigenvalue below
        ``-1e-10``.

    """
    _require_same_dim(h, rho)
    validate_density(rho)
    # Tr(HR) = sum_ij H_ij R_ji
    value = complex(np.sum(h.matrix * rho.matrix.T))
    return _real_part(value, "Trace product")


def validate_density(rho: HermitianOperator) -> None:
    """Check unit trace and positive semidefiniteness to ``1e-10``.

    Raises
    ------
    InvalidDensityError
        If either property fails.

    """
    trace = float(np.trace(rho.matrix).real)
    if abs(trace - 1.0) > DENSITY_TOLERANCE:
        msg = f"Density operator trace is {trace!r}, expected 1"
        raise InvalidDensityError(msg)
    smallest = float(scipy.linalg.eigvalsh(rho.matrix)[0])
    if smallest < -DENSITY_TOLERANCE:
        msg = f"Density operator has negative eigenvalue {smallest:.3e}"
        raise InvalidDensityError(msg)


def reduced_density(
    psi: npt.ArrayLike,
    dim_a: int,
    dim_b: int,
    *,
    keep: typ.Literal["A", "B"] = "A",
) -> HermitianOperator:
    """Return the reduced state of one party of a bipartite pure state.

    ``psi`` uses the slow-left layout. Keeping ``A`` traces out the fast
    axis; keeping ``B`` traces out the slow one.
    """
    vector = _as_state(psi, dim_a * dim_b)
    coefficients = vector.reshape(dim_a, dim_b)
    if keep == "A":
        return HermitianOperator(coefficients @ coefficients.conj().T)
    if keep == "B":
        return HermitianOperator(coefficients.T @ coefficients.conj())
    msg = f"keep must be 'A' or 'B', got {keep!r}"
    raise ShapeError(msg)


__all__ = [
    "ComplexMatrix",
    "HermitianOperator",
    "SpectralDecomposition",
    "expectation",
    "hermitian_eigensystem",
    "largest_eigenvalue",
    "reduced_density",
    "tensor_expectation",
    "tensor_product",
    "trace_product",
    "validate_density",
]

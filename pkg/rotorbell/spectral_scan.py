"""Violation maps over the reduced phase plane and convergence in ``M``.

A scan evaluates the top eigenvalue of ``B^(M)(xi_a, xi_b)`` on every cell of
a :class:`PhaseGrid`. Cells are independent, so they are farmed out to a
thread pool; results are gathered in row-major cell order, which keeps the
assembled map independent of the schedule.
"""

from __future__ import annotations

import concurrent.futures as cf
import dataclasses as dc
import logging
import math
import typing as typ

import numpy as np

from ._validation_helpers import DomainError, NumericalError, OperatorSizeError
from .config import DEFAULT_MAX_PRODUCT_DIM, scan_thread_count
from .linalg_core import hermitian_eigensystem, largest_eigenvalue
from .rotor_operators import (
    CLASSICAL_BOUND,
    TSIRELSON_BOUND,
    PhaseAngle,
    TruncationLevel,
    bell_operator,
    kinetic_phase_unitary,
    reduced_bell_operator,
)

if typ.TYPE_CHECKING:
    import collections.abc as cabc

    import numpy.typing as npt

    from .rotor_operators import PhaseLike, TruncationLike

logger = logging.getLogger(__name__)

_BOUND_SLACK = 1e-9
_MIN_AXIS_POINTS = 2


class ScanError(NumericalError):
    """Raised when a grid cell cannot be evaluated.

    Attributes
    ----------
    cell
        ``(i, j)`` index of the failing cell.
    phases
        ``(xi_a, xi_b)`` at that cell, in radians.

    """

    def __init__(
        self,
        message: str,
        *,
        cell: tuple[int, int],
        phases: tuple[float, float],
    ) -> None:
        i, j = cell
        xi_a, xi_b = phases
        super().__init__(
            f"{message} at cell ({i}, {j}), xi_a={xi_a!r}, xi_b={xi_b!r}"
        )
        self.cell = cell
        self.phases = phases


def _axis(values: npt.ArrayLike, label: str) -> np.ndarray:
    axis = np.array(values, dtype=np.float64, copy=True)
    if axis.ndim != 1 or axis.shape[0] < _MIN_AXIS_POINTS:
        msg = f"{label} needs at least 2 points, got shape {axis.shape}"
        raise DomainError(msg)
    if not np.all(np.isfinite(axis)):
        msg = f"{label} contains non-finite values"
        raise DomainError(msg)
    if np.any(np.diff(axis) <= 0.0):
        msg = f"{label} must be strictly increasing"
        raise DomainError(msg)
    if axis[0] < 0.0 or axis[-1] > math.pi:
        msg = f"{label} must lie within [0, pi]"
        raise DomainError(msg)
    axis.setflags(write=False)
    return axis


@dc.dataclass(frozen=True, slots=True, eq=False)
class PhaseGrid:
    """Rectangular grid of reduced phases ``(xi_a, xi_b)`` in ``[0, pi]^2``."""

    xi_a_values: np.ndarray
    xi_b_values: np.ndarray

    def __post_init__(self) -> None:
        """Validate and freeze both axes."""
        object.__setattr__(self, "xi_a_values", _axis(self.xi_a_values, "xi_a"))
        object.__setattr__(self, "xi_b_values", _axis(self.xi_b_values, "xi_b"))

    @classmethod
    def uniform(cls, points: int) -> PhaseGrid:
        """Return the square grid with ``points`` evenly spaced values per axis.

        Both endpoints ``0`` and ``pi`` are included, so an odd ``points``
        places a node exactly on ``pi / 2``.
        """
        if not isinstance(points, int) or points < _MIN_AXIS_POINTS:
            msg = f"Phase grid needs at least 2 points per axis, got {points!r}"
            raise DomainError(msg)
        axis = np.linspace(0.0, math.pi, points)
        return cls(axis, axis)

    @property
    def shape(self) -> tuple[int, int]:
        """Number of ``xi_a`` and ``xi_b`` values."""
        return (int(self.xi_a_values.shape[0]), int(self.xi_b_values.shape[0]))

    def cells(self) -> cabc.Iterator[tuple[int, int]]:
        """Yield cell indices in row-major order."""
        rows, cols = self.shape
        for i in range(rows):
            for j in range(cols):
                yield i, j


@dc.dataclass(frozen=True, slots=True)
class GridMaximum:
    """Location and value of the largest entry of a violation map."""

    xi_a: float
    xi_b: float
    value: float
    cell: tuple[int, int]


@dc.dataclass(frozen=True, slots=True, eq=False)
class ViolationMap:
    """Top Bell eigenvalue over a phase grid.

    Attributes
    ----------
    truncation
        Truncation level of the scanned operators.
    grid
        The phase grid.
    b_max
        Read-only array with ``b_max[i, j]`` at ``(xi_a[i], xi_b[j])``.

    """

    truncation: TruncationLevel
    grid: PhaseGrid
    b_max: np.ndarray

    def __post_init__(self) -> None:
        """Check the value array against the grid and freeze it."""
        values = np.array(self.b_max, dtype=np.float64, copy=True)
        if values.shape != self.grid.shape:
            msg = f"b_max shape {values.shape} does not match grid {self.grid.shape}"
            raise DomainError(msg)
        values.setflags(write=False)
        object.__setattr__(self, "b_max", values)

    @property
    def argmax(self) -> GridMaximum:
        """Return the grid maximum.

        Ties go to the smallest ``xi_a``, then the smallest ``xi_b``.
        """
        flat = int(np.argmax(self.b_max))
        i, j = np.unravel_index(flat, self.b_max.shape)
        return GridMaximum(
            xi_a=float(self.grid.xi_a_values[i]),
            xi_b=float(self.grid.xi_b_values[j]),
            value=float(self.b_max[i, j]),
            cell=(int(i), int(j)),
        )

    @property
    def violation_fraction(self) -> float:
        """Share of cells whose top eigenvalue exceeds the classical bound 2."""
        return float(np.mean(self.b_max > CLASSICAL_BOUND))

    def rows(self) -> cabc.Iterator[tuple[float, float, float]]:
        """Yield ``(xi_a, xi_b, b_max)`` in row-major order."""
        for i, j in self.grid.cells():
            yield (
                float(self.grid.xi_a_values[i]),
                float(self.grid.xi_b_values[j]),
                float(self.b_max[i, j]),
            )


def max_eigenvalue_surface(
    truncation: TruncationLike,
    grid: PhaseGrid,
    *,
    workers: int | None = None,
    max_dim: int = DEFAULT_MAX_PRODUCT_DIM,
) -> ViolationMap:
    """Scan the top eigenvalue of ``B^(M)(xi_a, xi_b)`` over ``grid``.

    Parameters
    ----------
    truncation
        Truncation order ``M``.
    grid
        The phase grid to evaluate.
    workers
        Thread count; defaults to :func:`rotorbell.config.scan_thread_count`.
    max_dim
        Ceiling on the bipartite dimension.

    Returns
    -------
    ViolationMap
        The assembled map. Its values do not depend on ``workers``.

    Raises
    ------
    OperatorSizeError
        If ``(2M + 1)^2`` exceeds ``max_dim``.
    ScanError
        If a cell fails to diagonalize or breaks the ``2 sqrt 2`` bound.

    """
    level = TruncationLevel.coerce(truncation)
    if level.dim**2 > max_dim:
        msg = f"Bipartite dimension {level.dim**2} exceeds the ceiling {max_dim}"
        raise OperatorSizeError(msg)
    pool_size = scan_thread_count() if workers is None else workers
    xi_a_values = grid.xi_a_values
    xi_b_values = grid.xi_b_values

    def evaluate(cell: tuple[int, int]) -> float:
        i, j = cell
        phases = (float(xi_a_values[i]), float(xi_b_values[j]))
        try:
            value = largest_eigenvalue(
                reduced_bell_operator(level, *phases, max_dim=max_dim)
            )
        except NumericalError as exc:
            msg = "Eigensolver failed"
            raise ScanError(msg, cell=cell, phases=phases) from exc
        if abs(value) > TSIRELSON_BOUND + _BOUND_SLACK:
            msg = f"Top eigenvalue {value!r} exceeds 2 sqrt 2"
            raise ScanError(msg, cell=cell, phases=phases)
        return value

    rows, cols = grid.shape
    logger.info(
        "Scanning %dx%d phase grid at M=%d with %d workers",
        rows,
        cols,
        level.order,
        pool_size,
    )
    with cf.ThreadPoolExecutor(max_workers=pool_size) as executor:
        values = list(executor.map(evaluate, grid.cells()))

    surface = ViolationMap(
        truncation=level,
        grid=grid,
        b_max=np.reshape(np.array(values), (rows, cols)),
    )
    peak = surface.argmax
    logger.debug(
        "Scan maximum %.12f at xi_a=%.6f, xi_b=%.6f", peak.value, peak.xi_a, peak.xi_b
    )
    return surface


@dc.dataclass(frozen=True, slots=True)
class ConvergenceRow:
    """Top eigenvalue at ``(pi/2, pi/2)`` for one truncation order."""

    order: int
    b_max: float
    gap: float


@dc.dataclass(frozen=True, slots=True)
class ConvergenceReport:
    """Rows of a convergence study, ordered by strictly increasing ``M``."""

    rows: tuple[ConvergenceRow, ...]

    def __post_init__(self) -> None:
        """Reject empty or unordered row sets."""
        if not self.rows:
            msg = "Convergence report needs at least one row"
            raise DomainError(msg)
        orders = [row.order for row in self.rows]
        if any(b <= a for a, b in zip(orders, orders[1:], strict=False)):
            msg = f"Truncation orders must be strictly increasing, got {orders}"
            raise DomainError(msg)

    @property
    def is_monotone(self) -> bool:
        """Whether ``b_max`` strictly increases from row to row."""
        values = [row.b_max for row in self.rows]
        return all(b > a for a, b in zip(values, values[1:], strict=False))


def convergence_study(
    m_list: cabc.Sequence[TruncationLike],
    *,
    max_dim: int = DEFAULT_MAX_PRODUCT_DIM,
) -> ConvergenceReport:
    """Return ``b_max(pi/2, pi/2)`` and its gap to ``2 sqrt 2`` for each ``M``."""
    levels = [TruncationLevel.coerce(item) for item in m_list]
    if not levels:
        msg = "Convergence study needs at least one truncation order"
        raise DomainError(msg)
    half_pi = math.pi / 2
    rows = []
    for level in levels:
        value = largest_eigenvalue(
            reduced_bell_operator(level, half_pi, half_pi, max_dim=max_dim)
        )
        logger.debug("M=%d: b_max(pi/2, pi/2) = %.15f", level.order, value)
        rows.append(ConvergenceRow(level.order, value, TSIRELSON_BOUND - value))
    return ConvergenceReport(tuple(rows))


@dc.dataclass(frozen=True, slots=True)
class EquivalenceReport:
    """Comparison of a four-phase Bell operator with its reduced form.

    Attributes
    ----------
    reduced_phases
        ``(phi_a' - phi_a, phi_b' - phi_b)`` reduced to ``[0, 2pi)``.
    max_spectral_deviation
        Largest difference between the sorted eigenvalue lists.
    operator_residual
        ``max|(U_a (x) U_b)^H B(xi_a, xi_b) (U_a (x) U_b) - B_full|`` with
        ``U = kinetic_phase_unitary`` at ``phi_a`` and ``phi_b``.

    """

    reduced_phases: tuple[float, float]
    max_spectral_deviation: float
    operator_residual: float


def unitary_equivalence_check(
    truncation: TruncationLike,
    phases: tuple[PhaseLike, PhaseLike, PhaseLike, PhaseLike],
    *,
    max_dim: int = DEFAULT_MAX_PRODUCT_DIM,
) -> EquivalenceReport:
    """Compare ``B(phi_a, phi_a', phi_b, phi_b')`` with its two-phase reduction."""
    level = TruncationLevel.coerce(truncation)
    phi_a, phi_a_prime, phi_b, phi_b_prime = (
        PhaseAngle.coerce(phase).value for phase in phases
    )
    xi_a = PhaseAngle(phi_a_prime - phi_a).value
    xi_b = PhaseAngle(phi_b_prime - phi_b).value

    full = bell_operator(
        level, (phi_a, phi_a_prime, phi_b, phi_b_prime), max_dim=max_dim
    )
    reduced = reduced_bell_operator(level, xi_a, xi_b, max_dim=max_dim)
    deviation = float(
        np.max(
            np.abs(
                hermitian_eigensystem(full).eigenvalues
                - hermitian_eigensystem(reduced).eigenvalues
            )
        )
    )

    joint = np.kron(
        kinetic_phase_unitary(level, phi_a).matrix,
        kinetic_phase_unitary(level, phi_b).matrix,
    )
    rotated = joint.conj().T @ reduced.matrix @ joint
    residual = float(np.max(np.abs(rotated - full.matrix)))
    logger.debug(
        "Equivalence at M=%d: spectral %.3e, operator %.3e",
        level.order,
        deviation,
        residual,
    )
    return EquivalenceReport(
        reduced_phases=(xi_a, xi_b),
        max_spectral_deviation=deviation,
        operator_residual=residual,
    )


__all__ = [
    "ConvergenceReport",
    "ConvergenceRow",
    "EquivalenceReport",
    "GridMaximum",
    "PhaseGrid",
    "ScanError",
    "ViolationMap",
    "convergence_study",
    "max_eigenvalue_surface",
    "unitary_equivalence_check",
]

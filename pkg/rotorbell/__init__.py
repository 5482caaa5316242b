"""rotorbell package."""

from __future__ import annotations

from ._validation_helpers import (
    ConfigValidationError,
    DomainError,
    EigensolverError,
    IntegrationError,
    NumericalError,
    OperatorError,
    OperatorSizeError,
)
from .api_stability import PUBLIC_API, ApiStability
from .continuum_analytic import (
    REALIZED_Y_SIGN,
    STATED_Y_SIGN,
    WavePacketProfile,
    chi_eigenvector,
    chsh_block,
    slit_expectation,
    slit_profile,
    violation_aperture_threshold,
    wavepacket_expectation,
    werner_expectation,
    werner_threshold,
)
from .linalg_core import (
    HermitianOperator,
    SpectralDecomposition,
    expectation,
    hermitian_eigensystem,
    tensor_expectation,
    tensor_product,
    trace_product,
)
from .rotor_operators import (
    PhaseAngle,
    TruncationLevel,
    bell_expectation,
    bell_operator,
    cosine_observable,
    kinetic_phase_unitary,
    periodic_observable,
    phase_rotated_cosine,
    reduced_bell_operator,
)
from .spectral_scan import (
    PhaseGrid,
    ScanError,
    ViolationMap,
    convergence_study,
    max_eigenvalue_surface,
    unitary_equivalence_check,
)
from .states import (
    entangled_packet_state,
    slit_state,
    truncated_violation,
    werner_bell_expectation,
    werner_density,
)

__all__ = [
    "PUBLIC_API",
    "REALIZED_Y_SIGN",
    "STATED_Y_SIGN",
    "ApiStability",
    "ConfigValidationError",
    "DomainError",
    "EigensolverError",
    "HermitianOperator",
    "IntegrationError",
    "NumericalError",
    "OperatorError",
    "OperatorSizeError",
    "PhaseAngle",
    "PhaseGrid",
    "ScanError",
    "SpectralDecomposition",
    "TruncationLevel",
    "ViolationMap",
    "WavePacketProfile",
    "bell_expectation",
    "bell_operator",
    "chi_eigenvector",
    "chsh_block",
    "convergence_study",
    "cosine_observable",
    "entangled_packet_state",
    "expectation",
    "hermitian_eigensystem",
    "kinetic_phase_unitary",
    "max_eigenvalue_surface",
    "periodic_observable",
    "phase_rotated_cosine",
    "reduced_bell_operator",
    "slit_expectation",
    "slit_profile",
    "slit_state",
    "tensor_expectation",
    "tensor_product",
    "trace_product",
    "truncated_violation",
    "unitary_equivalence_check",
    "violation_aperture_threshold",
    "wavepacket_expectation",
    "werner_bell_expectation",
    "werner_density",
    "werner_expectation",
    "werner_threshold",
]

"""Stability tiers and the public surface registry.

Every name exported from ``rotorbell`` is listed in :data:`PUBLIC_API` with
a tier. Unit tests check the registry against ``rotorbell.__all__`` so that
an export cannot be added without deciding how stable it is.

Stability tiers
---------------
- **stable**: numerical results and signatures change only with a
  changelog entry.
- **provisional**: may change between minor versions; currently used for
  the block orientation switches, whose naming follows an unresolved sign
  convention.
"""

from __future__ import annotations

import enum
import typing as typ
from types import MappingProxyType

if typ.TYPE_CHECKING:
    import collections.abc as cabc


class ApiStability(enum.StrEnum):
    """Stability tier for a public API element.

    Attributes
    ----------
    STABLE
        Supported; changes are announced in the changelog.
    PROVISIONAL
        May change without notice; pin versions when relying on it.

    """

    STABLE = "stable"
    PROVISIONAL = "provisional"


_STABLE = ApiStability.STABLE
_PROVISIONAL = ApiStability.PROVISIONAL

PUBLIC_API: cabc.Mapping[str, ApiStability] = MappingProxyType({
    # Errors
    "ConfigValidationError": _STABLE,
    "DomainError": _STABLE,
    "EigensolverError": _STABLE,
    "IntegrationError": _STABLE,
    "NumericalError": _STABLE,
    "OperatorError": _STABLE,
    "OperatorSizeError": _STABLE,
    "ScanError": _STABLE,
    # Linear algebra
    "HermitianOperator": _STABLE,
    "SpectralDecomposition": _STABLE,
    "expectation": _STABLE,
    "hermitian_eigensystem": _STABLE,
    "tensor_expectation": _STABLE,
    "tensor_product": _STABLE,
    "trace_product": _STABLE,
    # Rotor operators
    "PhaseAngle": _STABLE,
    "TruncationLevel": _STABLE,
    "bell_expectation": _STABLE,
    "bell_operator": _STABLE,
    "cosine_observable": _STABLE,
    "kinetic_phase_unitary": _STABLE,
    "periodic_observable": _STABLE,
    "phase_rotated_cosine": _STABLE,
    "reduced_bell_operator": _STABLE,
    # Scans
    "PhaseGrid": _STABLE,
    "ViolationMap": _STABLE,
    "convergence_study": _STABLE,
    "max_eigenvalue_surface": _STABLE,
    "unitary_equivalence_check": _STABLE,
    # Continuum results
    "REALIZED_Y_SIGN": _PROVISIONAL,
    "STATED_Y_SIGN": _PROVISIONAL,
    "WavePacketProfile": _STABLE,
    "chi_eigenvector": _STABLE,
    "chsh_block": _STABLE,
    "slit_expectation": _STABLE,
    "slit_profile": _STABLE,
    "violation_aperture_threshold": _STABLE,
    "wavepacket_expectation": _STABLE,
    "werner_expectation": _STABLE,
    "werner_threshold": _STABLE,
    # Truncated states
    "entangled_packet_state": _STABLE,
    "slit_state": _STABLE,
    "truncated_violation": _STABLE,
    "werner_bell_expectation": _STABLE,
    "werner_density": _STABLE,
    # Registry (self-referential)
    "ApiStability": _STABLE,
    "PUBLIC_API": _STABLE,
})


def symbols_with_tier(tier: ApiStability) -> tuple[str, ...]:
    """Return the registered names at ``tier``, sorted."""
    return tuple(sorted(name for name, value in PUBLIC_API.items() if value is tier))


__all__ = ["PUBLIC_API", "ApiStability", "symbols_with_tier"]

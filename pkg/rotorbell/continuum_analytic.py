"""Exact continuum results for the angular CHSH problem.

In the continuum the Bell operator at ``xi_a = xi_b = pi/2`` splits into a
direct sum of 4x4 blocks, one for every pair of half-circle angles
``(theta, theta')``, weighted by ``cos theta cos theta'``. Each block acts on
``(|theta theta'>, |theta theta-bar'>, |theta-bar theta'>,
|theta-bar theta-bar'>)`` with ``theta-bar = theta - pi`` and is built from
the block Pauli matrices below.

Two orientations of the block are exposed through ``y_sign``.
``STATED_Y_SIGN`` gives ``zz - yz - zy - yy``. ``REALIZED_Y_SIGN`` gives
``zz + yz + zy - yy``, which is the block the truncated rotor operators
converge to because ``C(pi/2) = +int cos(theta) sigma^y(theta)``.

Wave packets enter only through the moment ``int cos(theta) g(theta)^2``,
so every expectation here is a product of one-dimensional integrals.
"""

from __future__ import annotations

import dataclasses as dc
import functools
import logging
import math
import typing as typ

import numpy as np
import scipy.optimize
import scipy.special

from ._validation_helpers import DomainError, IntegrationError, ProfileError
from .linalg_core import HermitianOperator
from .rotor_operators import CLASSICAL_BOUND, TSIRELSON_BOUND

if typ.TYPE_CHECKING:
    import collections.abc as cabc

    import numpy.typing as npt

logger = logging.getLogger(__name__)

STATED_Y_SIGN = -1
REALIZED_Y_SIGN = 1

DEFAULT_QUADRATURE_TOL = 1e-10
QUADRATURE_ORDER = 16
MAX_PANEL_DOUBLINGS = 20
PROFILE_NORM_TOL = 1e-10
_MIN_TABLE_POINTS = 2

type Integrand = cabc.Callable[[np.ndarray], npt.ArrayLike]
type PauliKind = typ.Literal["x", "y", "z"]

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _require_sign(value: int, label: str) -> int:
    if value not in {1, -1}:
        msg = f"{label} must be +1 or -1, got {value!r}"
        raise DomainError(msg)
    return value


@dc.dataclass(frozen=True, slots=True)
class BlockAngle:
    """Half-circle angle ``theta`` in ``[0, pi)`` labelling a block."""

    theta: float

    def __post_init__(self) -> None:
        """Reject angles outside the half circle."""
        if not (math.isfinite(self.theta) and 0.0 <= self.theta < math.pi):
            msg = f"Block angle must lie in [0, pi), got {self.theta!r}"
            raise DomainError(msg)

    @property
    def partner(self) -> float:
        """The paired angle ``theta - pi`` in ``[-pi, 0)``."""
        return self.theta - math.pi


def block_pauli(kind: PauliKind) -> HermitianOperator:
    """Return ``sigma^kind(theta)`` over the ordered pair ``(|theta>, |theta-bar>)``.

    ``sigma^y = i(|theta-bar><theta| - |theta><theta-bar|)`` carries ``+i`` at
    the ``(theta-bar, theta)`` entry.
    """
    try:
        matrix = _PAULI[kind]
    except KeyError as exc:
        msg = f"Pauli kind must be one of 'x', 'y', 'z', got {kind!r}"
        raise DomainError(msg) from exc
    return HermitianOperator(matrix)


@dc.dataclass(frozen=True, slots=True, eq=False)
class ContinuumBlock:
    """The 4x4 CHSH block at ``(theta_a, theta_b)``.

    The matrix does not depend on the angles; they only label the basis.
    """

    theta_a: BlockAngle
    theta_b: BlockAngle
    matrix: HermitianOperator
    y_sign: int = STATED_Y_SIGN


def chsh_block(
    theta_a: float | BlockAngle,
    theta_b: float | BlockAngle,
    *,
    y_sign: int = STATED_Y_SIGN,
) -> ContinuumBlock:
    """Return ``X = zz + s(yz + zy) - yy`` with ``s = y_sign``.

    Both orientations have eigenvalues ``{-2 sqrt 2, 0, 0, 2 sqrt 2}`` and
    satisfy ``X^2 = 4(I + sigma_x (x) sigma_x)``.
    """
    sign = _require_sign(y_sign, "y_sign")
    angle_a = theta_a if isinstance(theta_a, BlockAngle) else BlockAngle(theta_a)
    angle_b = theta_b if isinstance(theta_b, BlockAngle) else BlockAngle(theta_b)
    z, y = _PAULI["z"], _PAULI["y"]
    matrix = np.kron(z, z) + sign * (np.kron(y, z) + np.kron(z, y)) - np.kron(y, y)
    return ContinuumBlock(angle_a, angle_b, HermitianOperator(matrix), sign)


def chi_normalization(sign: int) -> float:
    """Return ``N_+- = sqrt(2(2 -+ sqrt 2))``.

    The unit block eigenvector divides ``(1, c, c, 1)`` by ``sqrt(2) N_+-``.
    """
    _require_sign(sign, "sign")
    return math.sqrt(2.0 * (2.0 - sign * math.sqrt(2.0)))


def chi_eigenvector(sign: int, *, y_sign: int = STATED_Y_SIGN) -> np.ndarray:
    """Return the unit eigenvector of ``chsh_block`` with eigenvalue ``sign 2 sqrt 2``.

    Components are ``(1, c, c, 1) / (sqrt(2) N)`` with
    ``c = y_sign * sign * i(sqrt 2 - sign)``; for the stated orientation this
    is ``-+ i(sqrt 2 -+ 1)``.
    """
    _require_sign(sign, "sign")
    _require_sign(y_sign, "y_sign")
    off = y_sign * sign * 1j * (math.sqrt(2.0) - sign)
    vector = np.array([1.0, off, off, 1.0], dtype=np.complex128)
    vector /= math.sqrt(2.0) * chi_normalization(sign)
    vector.setflags(write=False)
    return vector


@functools.cache
def _legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = scipy.special.roots_legendre(order)
    return nodes, weights


def _panel_estimate(f: Integrand, a: float, b: float, panels: int) -> float:
    nodes, weights = _legendre_rule(QUADRATURE_ORDER)
    edges = np.linspace(a, b, panels + 1)
    centres = 0.5 * (edges[:-1] + edges[1:])
    half_widths = 0.5 * (edges[1:] - edges[:-1])
    points = centres[:, np.newaxis] + half_widths[:, np.newaxis] * nodes
    values = np.asarray(f(points.ravel()), dtype=np.float64).reshape(points.shape)
    if not np.all(np.isfinite(values)):
        msg = f"Integrand is not finite on [{a!r}, {b!r}]"
        raise DomainError(msg)
    return float(np.sum(half_widths[:, np.newaxis] * weights * values))


def quadrature(
    f: Integrand,
    a: float,
    b: float,
    tol: float = DEFAULT_QUADRATURE_TOL,
) -> float:
    """Integrate ``f`` over ``[a, b]`` by composite Gauss-Legendre quadrature.

    The number of panels doubles until two successive estimates differ by
    less than ``tol``; the last estimate is returned.

    Parameters
    ----------
    f
        Vectorized integrand mapping an array of abscissae to values.
    a, b
        Integration limits.
    tol
        Absolute tolerance on successive estimates.

    Raises
    ------
    IntegrationError
        If the estimates have not settled after 20 doublings.

    """
    if tol <= 0.0:
        msg = f"Quadrature tolerance must be positive, got {tol!r}"
        raise DomainError(msg)
    if a == b:
        return 0.0
    panels = 1
    previous = _panel_estimate(f, a, b, panels)
    estimates = (previous, previous)
    for _ in range(MAX_PANEL_DOUBLINGS):
        panels *= 2
        current = _panel_estimate(f, a, b, panels)
        if abs(current - previous) < tol:
            return current
        estimates = (previous, current)
        previous = current
    msg = f"Quadrature on [{a!r}, {b!r}] did not reach tol={tol!r}"
    raise IntegrationError(msg, estimates=estimates)


@dc.dataclass(frozen=True, slots=True, eq=False)
class WavePacketProfile:
    """Real amplitude ``g(theta)`` supported on ``[0, pi)``.

    Attributes
    ----------
    amplitude
        Vectorized function returning ``g`` at an array of angles.
    kind
        ``"slit"``, ``"tabulated"`` or ``"custom"``.
    breakpoints
        Interior points where ``g`` is not smooth; quadrature splits there.
    delta_theta
        Aperture of a slit profile, ``None`` otherwise.

    """

    amplitude: Integrand
    kind: str = "custom"
    breakpoints: tuple[float, ...] = ()
    delta_theta: float | None = None

    def __post_init__(self) -> None:
        """Check the L2 normalization of ``g``."""
        norm = self.integrate(lambda theta: np.square(self(theta)))
        if abs(norm - 1.0) > PROFILE_NORM_TOL:
            msg = f"Wave-packet profile has squared norm {norm!r}, expected 1"
            raise ProfileError(msg)

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        """Evaluate ``g`` at ``theta``."""
        return np.asarray(self.amplitude(theta), dtype=np.float64)

    @property
    def segments(self) -> tuple[tuple[float, float], ...]:
        """Sub-intervals of ``[0, pi]`` between consecutive breakpoints."""
        inner = sorted(p for p in self.breakpoints if 0.0 < p < math.pi)
        edges = [0.0, *inner, math.pi]
        return tuple(zip(edges[:-1], edges[1:], strict=True))

    def integrate(self, f: Integrand) -> float:
        """Integrate ``f`` over ``[0, pi]`` segment by segment."""
        return math.fsum(quadrature(f, a, b) for a, b in self.segments)


def check_aperture(delta_theta: float) -> float:
    """Return ``delta_theta`` if it is a valid slit aperture in ``(0, pi]``.

    Raises
    ------
    DomainError
        For non-finite, non-positive or over-wide apertures.

    """
    value = float(delta_theta)
    if not math.isfinite(value) or value <= 0.0:
        msg = f"Slit aperture must be positive, got {delta_theta!r}"
        raise DomainError(msg)
    if value > math.pi:
        msg = f"Slit aperture must not exceed pi, got {delta_theta!r}"
        raise DomainError(msg)
    return value


def slit_profile(delta_theta: float) -> WavePacketProfile:
    """Return ``g = 1/sqrt(delta_theta)`` on ``[0, delta_theta)`` and 0 elsewhere."""
    width = check_aperture(delta_theta)
    height = 1.0 / math.sqrt(width)

    def amplitude(theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=np.float64)
        return np.where((theta >= 0.0) & (theta < width), height, 0.0)

    return WavePacketProfile(
        amplitude, kind="slit", breakpoints=(width,), delta_theta=width
    )


def tabulated_profile(
    thetas: npt.ArrayLike, samples: npt.ArrayLike
) -> WavePacketProfile:
    """Return a profile interpolated linearly through ``(thetas, samples)``.

    The interpolant vanishes outside the sampled range and is rescaled to
    unit L2 norm.

    Raises
    ------
    ProfileError
        If the nodes are not strictly increasing within ``[0, pi]``, the
        samples are not finite, or the interpolant vanishes.

    """
    nodes = np.array(thetas, dtype=np.float64, copy=True)
    values = np.array(samples, dtype=np.float64, copy=True)
    if nodes.ndim != 1 or nodes.shape != values.shape:
        msg = "Tabulated profile needs matching 1-D node and sample arrays"
        raise ProfileError(msg)
    if nodes.shape[0] < _MIN_TABLE_POINTS:
        msg = "Tabulated profile needs at least two nodes"
        raise ProfileError(msg)
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(values))):
        msg = "Tabulated profile contains non-finite entries"
        raise ProfileError(msg)
    if np.any(np.diff(nodes) <= 0.0) or nodes[0] < 0.0 or nodes[-1] > math.pi:
        msg = "Tabulated nodes must increase strictly within [0, pi]"
        raise ProfileError(msg)

    def raw(theta: np.ndarray) -> np.ndarray:
        return np.interp(theta, nodes, values, left=0.0, right=0.0)

    breakpoints = tuple(float(node) for node in nodes)
    squared = math.fsum(
        quadrature(lambda theta: np.square(raw(theta)), a, b)
        for a, b in zip((0.0, *breakpoints), (*breakpoints, math.pi), strict=True)
    )
    if squared <= 0.0:
        msg = "Tabulated profile vanishes identically"
        raise ProfileError(msg)
    values /= math.sqrt(squared)
    return WavePacketProfile(raw, kind="tabulated", breakpoints=breakpoints)


def profile_cosine_moment(g: WavePacketProfile) -> float:
    """Return ``int_0^pi cos(theta) g(theta)^2 dtheta``."""
    return g.integrate(lambda theta: np.cos(theta) * np.square(g(theta)))


def wavepacket_expectation(g_a: WavePacketProfile, g_b: WavePacketProfile) -> float:
    """Return ``<B>`` for the entangled packet built from ``g_a`` and ``g_b``.

    The double integral ``2 sqrt 2 int int cos cos' g_a^2 g_b^2`` factorizes
    into the product of the two cosine moments.
    """
    return TSIRELSON_BOUND * profile_cosine_moment(g_a) * profile_cosine_moment(g_b)


def slit_expectation(delta_theta: float) -> float:
    """Return ``2 sqrt 2 (sin(dt) / dt)^2`` for a slit of aperture ``dt``.

    Raises
    ------
    DomainError
        If ``delta_theta`` is not in ``(0, pi]``.

    """
    width = check_aperture(delta_theta)
    return TSIRELSON_BOUND * float(np.sinc(width / math.pi)) ** 2


def violation_aperture_threshold(*, xtol: float = 1e-12) -> float:
    """Return the aperture ``dt*`` where the slit expectation crosses 2.

    Solves ``(sin(dt) / dt)^2 = 1/sqrt 2`` by bisection on ``(0, pi)``. The
    slit expectation is strictly decreasing, so slits narrower than ``dt*``
    violate the classical bound and wider ones do not.
    """

    def excess(width: float) -> float:
        return float(np.sinc(width / math.pi)) ** 2 - 1.0 / math.sqrt(2.0)

    root = float(scipy.optimize.bisect(excess, 0.0, math.pi, xtol=xtol))
    logger.debug("Violation aperture %.15f rad (%.4f deg)", root, math.degrees(root))
    return root


@dc.dataclass(frozen=True, slots=True)
class WernerMixing:
    """Weight ``eta`` of the separable part in ``eta rho_A rho_B + (1-eta) Psi``."""

    eta: float

    def __post_init__(self) -> None:
        """Reject weights outside ``[0, 1]``."""
        if not (math.isfinite(self.eta) and 0.0 <= self.eta <= 1.0):
            msg = f"Mixing weight eta must lie in [0, 1], got {self.eta!r}"
            raise DomainError(msg)

    @classmethod
    def coerce(cls, value: float | WernerMixing) -> WernerMixing:
        """Return ``value`` as a mixing weight."""
        return value if isinstance(value, WernerMixing) else cls(float(value))


def werner_expectation(
    eta: float | WernerMixing, g_a: WavePacketProfile, g_b: WavePacketProfile
) -> float:
    """Return ``(1 - eta) <B>_Psi``; the separable part contributes nothing."""
    mixing = WernerMixing.coerce(eta)
    return (1.0 - mixing.eta) * wavepacket_expectation(g_a, g_b)


@dc.dataclass(frozen=True, slots=True)
class WernerThreshold:
    """Largest separable weight that still violates, for one slit aperture."""

    delta_theta: float
    eta_star: float
    violates: bool


def werner_threshold(delta_theta: float) -> WernerThreshold:
    """Return ``eta*(dt) = 1 - (1/sqrt 2)(dt / sin dt)^2`` for a slit.

    Mixtures with ``eta < eta*`` violate the classical bound. Apertures at
    or beyond ``dt*`` give ``eta* = 0`` with ``violates`` false.
    """
    width = check_aperture(delta_theta)
    pure = slit_expectation(width)
    if pure <= CLASSICAL_BOUND:
        return WernerThreshold(width, 0.0, violates=False)
    # (1 - eta*) <B>_Psi = 2
    return WernerThreshold(width, 1.0 - CLASSICAL_BOUND / pure, violates=True)


__all__ = [
    "REALIZED_Y_SIGN",
    "STATED_Y_SIGN",
    "BlockAngle",
    "ContinuumBlock",
    "WavePacketProfile",
    "WernerMixing",
    "WernerThreshold",
    "block_pauli",
    "check_aperture",
    "chi_eigenvector",
    "chi_normalization",
    "chsh_block",
    "profile_cosine_moment",
    "quadrature",
    "slit_expectation",
    "slit_profile",
    "tabulated_profile",
    "violation_aperture_threshold",
    "wavepacket_expectation",
    "werner_expectation",
    "werner_threshold",
]

"""Command-line front end for rotorbell.

Each command computes one dataset, writes it as CSV or JSON and prints a
one-line summary on standard output. Angles are read in radians; degrees
appear only in summaries.

Run ``rotorbell scan --M 2 --grid-points 41`` or ``python -m rotorbell``.
Exit status is 0 on success, 2 for invalid input and 3 when a numerical
procedure fails.
"""

from __future__ import annotations

import argparse
import dataclasses as dc
import enum
import logging
import math
import sys
import traceback
import typing as typ
from pathlib import Path

from ._validation_helpers import (
    ConfigValidationError,
    NumericalError,
    _require_finite,
    _require_in_range,
    _require_positive_int,
)
from .config import (
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_PRODUCT_DIM,
    MAX_TRUNCATION,
    load_config_file,
    merge_configs,
)
from .continuum_analytic import (
    chi_eigenvector,
    chsh_block,
    slit_expectation,
    slit_profile,
    violation_aperture_threshold,
    werner_expectation,
    werner_threshold,
)
from .linalg_core import hermitian_eigensystem
from .output import Dataset, write_csv, write_json
from .rotor_operators import CLASSICAL_BOUND, TruncationLevel
from .spectral_scan import (
    PhaseGrid,
    convergence_study,
    max_eigenvalue_surface,
    unitary_equivalence_check,
)
from .states import truncated_violation

if typ.TYPE_CHECKING:
    import collections.abc as cabc

    from .types import Cell, RunFileConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

_PHASE_COUNT = 4
_MIN_GRID_POINTS = 2
_LOG_LEVELS = frozenset({"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"})
_PACKAGE_DIR = Path(__file__).resolve().parent


class Command(enum.StrEnum):
    """Datasets the front end can produce."""

    SCAN = "scan"
    CONVERGE = "converge"
    SLIT = "slit"
    WERNER = "werner"
    XBLOCK = "xblock"
    EQUIV = "equiv"


class OutputFormat(enum.StrEnum):
    """Serialization of the written dataset."""

    CSV = "csv"
    JSON = "json"


_DENSE_COMMANDS = frozenset({Command.SCAN, Command.CONVERGE, Command.EQUIV})
# Largest M whose dense two-rotor operator fits under the product ceiling.
_DENSE_ORDER_LIMIT = (math.isqrt(DEFAULT_MAX_PRODUCT_DIM) - 1) // 2


# Run-file key -> RunConfig field.
_FILE_KEYS: cabc.Mapping[str, str] = {
    "M": "truncation",
    "grid_points": "grid_points",
    "delta_theta": "delta_theta",
    "eta": "eta",
    "M_list": "m_list",
    "phases": "phases",
    "output": "output_path",
    "format": "output_format",
    "log_level": "log_level",
    "max_truncation": "max_truncation",
    "workers": "workers",
}
_LABELS = {field: key for key, field in _FILE_KEYS.items()}

_REQUIRED: cabc.Mapping[Command, tuple[str, ...]] = {
    Command.SCAN: ("truncation",),
    Command.CONVERGE: ("m_list",),
    Command.SLIT: ("delta_theta", "m_list"),
    Command.WERNER: ("delta_theta",),
    Command.XBLOCK: (),
    Command.EQUIV: ("truncation", "phases"),
}


@dc.dataclass(frozen=True, slots=True)
class RunConfig:
    """Validated settings for one command.

    Attributes
    ----------
    command
        The dataset to produce.
    truncation
        Truncation order ``M`` for ``scan`` and ``equiv``.
    grid_points
        Points per phase axis for ``scan``.
    delta_theta
        Slit aperture in radians for ``slit`` and ``werner``.
    eta
        Separable weight for ``werner``; omit to compute the threshold.
    m_list
        Ascending truncation orders for ``converge`` and ``slit``.
    phases
        ``(phi_a, phi_a', phi_b, phi_b')`` in radians for ``equiv``.
    output_path
        Destination file; defaults to ``<command>.<format>``.
    output_format
        ``csv`` or ``json``.
    log_level
        Standard-library logging level name.
    max_truncation
        Ceiling accepted for any truncation order.
    workers
        Scan thread count; ``None`` defers to ``ROTORBELL_SCAN_THREADS``.

    """

    command: Command
    truncation: int | None = None
    grid_points: int = DEFAULT_GRID_POINTS
    delta_theta: float | None = None
    eta: float | None = None
    m_list: tuple[int, ...] = ()
    phases: tuple[float, ...] | None = None
    output_path: Path | None = None
    output_format: OutputFormat = OutputFormat.CSV
    log_level: str = "WARNING"
    max_truncation: int = MAX_TRUNCATION
    workers: int | None = None

    def validate(self) -> None:
        """Check every field the command needs.

        Raises
        ------
        ConfigValidationError
            Naming the first offending field.

        """
        for field in _REQUIRED[self.command]:
            if getattr(self, field) in {None, ()}:
                msg = f"{_LABELS[field]}: required for the {self.command} command"
                raise ConfigValidationError(msg)
        _require_positive_int(self.max_truncation, "max_truncation")
        self._validate_orders()
        self._validate_continuum()
        if self.workers is not None:
            _require_positive_int(self.workers, "workers")
        if self.log_level not in _LOG_LEVELS:
            msg = f"log_level: expected one of {sorted(_LOG_LEVELS)}"
            raise ConfigValidationError(msg)

    def _validate_orders(self) -> None:
        if self.truncation is not None:
            self._check_order(self.truncation, "M")
        _require_positive_int(self.grid_points, "grid_points")
        if self.grid_points < _MIN_GRID_POINTS:
            msg = "grid_points: a phase grid needs at least 2 points per axis"
            raise ConfigValidationError(msg)
        for order in self.m_list:
            self._check_order(order, "M_list")
        if any(b <= a for a, b in zip(self.m_list, self.m_list[1:], strict=False)):
            msg = "M_list: truncation orders must be strictly increasing"
            raise ConfigValidationError(msg)

    def _check_order(self, order: int, label: str) -> None:
        _require_positive_int(order, label)
        if order > self.max_truncation:
            msg = f"{label}: {order} exceeds max_truncation {self.max_truncation}"
            raise ConfigValidationError(msg)
        if self.command in _DENSE_COMMANDS and order > _DENSE_ORDER_LIMIT:
            msg = (
                f"{label}: {order} exceeds the dense ceiling {_DENSE_ORDER_LIMIT} "
                f"for the {self.command} command"
            )
            raise ConfigValidationError(msg)

    def _validate_continuum(self) -> None:
        if self.delta_theta is not None:
            width = _require_finite(self.delta_theta, "delta_theta")
            if width <= 0.0:
                msg = "delta_theta: slit aperture must be positive"
                raise ConfigValidationError(msg)
            _require_in_range(width, "delta_theta", bounds=(0.0, math.pi))
        if self.eta is not None:
            eta = _require_finite(self.eta, "eta")
            _require_in_range(eta, "eta", bounds=(0.0, 1.0))
        if self.phases is not None:
            if len(self.phases) != _PHASE_COUNT:
                msg = "phases: expected phi_a, phi_a', phi_b, phi_b'"
                raise ConfigValidationError(msg)
            for phase in self.phases:
                _require_finite(phase, "phases")

    @property
    def resolved_output(self) -> Path:
        """Output file, defaulting to ``<command>.<format>``."""
        if self.output_path is not None:
            return self.output_path
        return Path(f"{self.command}.{self.output_format}")

    def level(self, order: int) -> TruncationLevel:
        """Return ``order`` as a truncation level under ``max_truncation``."""
        return TruncationLevel(order, ceiling=self.max_truncation)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> typ.NoReturn:
        raise ConfigValidationError(message)


def _number_list(kind: type[int] | type[float]) -> cabc.Callable[[str], list]:
    def parse(text: str) -> list:
        try:
            return [kind(item) for item in text.split(",") if item.strip()]
        except ValueError as exc:
            msg = f"expected a comma-separated list, got {text!r}"
            raise argparse.ArgumentTypeError(msg) from exc

    return parse


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="rotorbell",
        description="CHSH violation datasets for continuous angular variables.",
        allow_abbrev=False,
    )
    parser.add_argument("command", choices=[command.value for command in Command])
    parser.add_argument("--M", type=int, dest="M")
    parser.add_argument("--grid-points", type=int, dest="grid_points")
    parser.add_argument("--delta-theta", type=float, dest="delta_theta")
    parser.add_argument("--eta", type=float)
    parser.add_argument("--M-list", type=_number_list(int), dest="M_list")
    parser.add_argument("--phases", type=_number_list(float))
    parser.add_argument("--output")
    parser.add_argument("--format", choices=[fmt.value for fmt in OutputFormat])
    parser.add_argument("--config", type=Path)
    parser.add_argument("--log-level", dest="log_level", type=str.upper)
    parser.add_argument("--max-truncation", type=int, dest="max_truncation")
    parser.add_argument("--workers", type=int)
    return parser


def _as_real(value: object) -> object:
    if isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def _coerce_reals(fields: dict[str, typ.Any]) -> None:
    # TOML integers stand for reals in real-valued keys.
    for name in ("delta_theta", "eta"):
        if name in fields:
            fields[name] = _as_real(fields[name])
    if "phases" in fields:
        fields["phases"] = tuple(_as_real(phase) for phase in fields["phases"])


def _config_from_mapping(command: str, values: RunFileConfig) -> RunConfig:
    fields: dict[str, typ.Any] = {
        _FILE_KEYS[key]: value for key, value in values.items()
    }
    for name in ("m_list", "phases"):
        if name in fields:
            if not isinstance(fields[name], list | tuple):
                msg = f"{_LABELS[name]}: expected a list"
                raise ConfigValidationError(msg)
            fields[name] = tuple(fields[name])
    _coerce_reals(fields)
    if "output_path" in fields:
        fields["output_path"] = Path(str(fields["output_path"]))
    if "output_format" in fields:
        try:
            fields["output_format"] = OutputFormat(fields["output_format"])
        except ValueError as exc:
            msg = "format: expected csv or json"
            raise ConfigValidationError(msg) from exc
    config = RunConfig(command=Command(command), **fields)
    config.validate()
    return config


def parse_config(
    args: cabc.Sequence[str] | None = None, config_file: Path | None = None
) -> RunConfig:
    """Build a validated :class:`RunConfig` from flags and an optional run file.

    Values from the run file are overridden by explicit flags.

    Raises
    ------
    ConfigValidationError
        For unknown flags or keys, missing fields, or unparseable values.

    """
    namespace = vars(_build_parser().parse_args(args))
    command = namespace.pop("command")
    file_path = namespace.pop("config") or config_file
    file_values: RunFileConfig = {}
    if file_path is not None:
        file_values = load_config_file(file_path)
        logger.debug("Loaded run file %s", file_path)
    merged = merge_configs(typ.cast("dict[str, object]", file_values), namespace)
    return _config_from_mapping(command, typ.cast("RunFileConfig", merged))


def _degrees(radians: float) -> str:
    return f"{radians:.6f} rad ({math.degrees(radians):.2f} deg)"


def _scan(config: RunConfig) -> Dataset:
    level = config.level(typ.cast("int", config.truncation))
    surface = max_eigenvalue_surface(
        level, PhaseGrid.uniform(config.grid_points), workers=config.workers
    )
    peak = surface.argmax
    summary = (
        f"M={level.order}: max b_max={peak.value:.6f} at xi_a={_degrees(peak.xi_a)}, "
        f"xi_b={_degrees(peak.xi_b)}; violation fraction "
        f"{surface.violation_fraction:.3f}"
    )
    return Dataset(("xi_a", "xi_b", "b_max"), tuple(surface.rows()), summary)


def _converge(config: RunConfig) -> Dataset:
    report = convergence_study([config.level(order) for order in config.m_list])
    rows = tuple((row.order, row.b_max, row.gap) for row in report.rows)
    last = report.rows[-1]
    summary = (
        f"b_max(pi/2, pi/2) at M={last.order}: {last.b_max:.6f}, gap {last.gap:.3e}; "
        f"{'monotone' if report.is_monotone else 'not monotone'} in M"
    )
    return Dataset(("M", "b_max", "gap_to_2sqrt2"), rows, summary)


def _slit(config: RunConfig) -> Dataset:
    width = typ.cast("float", config.delta_theta)
    records = [
        truncated_violation(config.level(order), width) for order in config.m_list
    ]
    rows = tuple(
        (r.order, r.value, r.analytic, r.abs_error, r.tail_mass) for r in records
    )
    analytic = slit_expectation(width)
    verdict = "violation" if analytic > CLASSICAL_BOUND else "no violation"
    summary = (
        f"aperture {_degrees(width)}: analytic <B>={analytic:.6f} ({verdict}); "
        f"threshold aperture {_degrees(violation_aperture_threshold())}"
    )
    columns = ("M", "value", "analytic", "abs_error", "tail_mass")
    return Dataset(columns, rows, summary)


def _werner(config: RunConfig) -> Dataset:
    width = typ.cast("float", config.delta_theta)
    if config.eta is None:
        threshold = werner_threshold(width)
        verdict = "violates below" if threshold.violates else "no violation at any"
        summary = (
            f"aperture {_degrees(width)}: eta*={threshold.eta_star:.6f} "
            f"({verdict} eta)"
        )
        rows: tuple[tuple[Cell, ...], ...] = ((width, threshold.eta_star),)
        return Dataset(("delta_theta", "eta_star"), rows, summary)
    profile = slit_profile(width)
    value = werner_expectation(config.eta, profile, profile)
    verdict = "violation" if value > CLASSICAL_BOUND else "no violation"
    summary = f"eta={config.eta}: Tr[B rho]={value:.6f} ({verdict})"
    return Dataset(("eta", "expectation"), ((config.eta, value),), summary)


def _xblock(_config: RunConfig) -> Dataset:
    block = chsh_block(0.0, 0.0)
    matrix = block.matrix.matrix
    rows: list[tuple[Cell, ...]] = [
        ("X", i, j, float(matrix[i, j].real), float(matrix[i, j].imag))
        for i in range(4)
        for j in range(4)
    ]
    eigenvalues = hermitian_eigensystem(block.matrix).eigenvalues
    rows.extend(("eigenvalue", k, 0, float(v), 0.0) for k, v in enumerate(eigenvalues))
    for name, sign in (("chi+", 1), ("chi-", -1)):
        rows.extend(
            (name, k, 0, float(c.real), float(c.imag))
            for k, c in enumerate(chi_eigenvector(sign))
        )
    summary = (
        f"X eigenvalues {', '.join(f'{v:.6f}' for v in eigenvalues)}; "
        "chi+- eigenvalues +-2 sqrt 2"
    )
    return Dataset(("quantity", "i", "j", "real", "imag"), tuple(rows), summary)


def _equiv(config: RunConfig) -> Dataset:
    phases = typ.cast("tuple[float, float, float, float]", config.phases)
    report = unitary_equivalence_check(
        config.level(typ.cast("int", config.truncation)), phases
    )
    xi_a, xi_b = report.reduced_phases
    summary = (
        f"reduced phases ({xi_a:.6f}, {xi_b:.6f}): spectral deviation "
        f"{report.max_spectral_deviation:.3e}, operator residual "
        f"{report.operator_residual:.3e}"
    )
    rows = ((report.max_spectral_deviation,),)
    return Dataset(("max_spectral_deviation",), rows, summary)


_HANDLERS: cabc.Mapping[Command, cabc.Callable[[RunConfig], Dataset]] = {
    Command.SCAN: _scan,
    Command.CONVERGE: _converge,
    Command.SLIT: _slit,
    Command.WERNER: _werner,
    Command.XBLOCK: _xblock,
    Command.EQUIV: _equiv,
}


def _origin(exc: BaseException) -> str:
    # Deepest frame inside the package names the failing module.
    for frame in reversed(traceback.extract_tb(exc.__traceback__)):
        path = Path(frame.filename).resolve()
        if path.is_relative_to(_PACKAGE_DIR):
            return f"rotorbell.{path.stem}"
    return "rotorbell"


def run(config: RunConfig) -> int:
    """Compute, write and summarize the dataset for ``config``.

    Returns
    -------
    int
        ``0`` on success, ``2`` for invalid input, ``3`` for numerical failure.

    """
    logger.info("Running %s", config.command)
    try:
        dataset = _HANDLERS[config.command](config)
        path = config.resolved_output
        if config.output_format is OutputFormat.JSON:
            write_json(path, dataset, config.command.value)
        else:
            write_csv(path, dataset)
    except NumericalError as exc:
        print(f"{_origin(exc)}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"{_origin(exc)}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(dataset.summary)
    return EXIT_OK


def main(argv: cabc.Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the command and return the exit status."""
    try:
        config = parse_config(argv)
    except ConfigValidationError as exc:
        print(f"rotorbell: {exc}", file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(
        level=config.log_level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return run(config)


__all__ = [
    "EXIT_INVALID",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "Command",
    "OutputFormat",
    "RunConfig",
    "main",
    "parse_config",
    "run",
]

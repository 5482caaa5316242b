"""CSV and JSON writers for command datasets.

Every real is written with 17 significant digits, trailing zeros kept, so
each value round-trips exactly and an integral real is never mistaken for
an integer. Both writers use ``\\n`` line endings so reruns are
byte-identical across platforms.
"""

from __future__ import annotations

import csv
import dataclasses as dc
import json
import logging
import math
import typing as typ

if typ.TYPE_CHECKING:
    import collections.abc as cabc
    from pathlib import Path

    from .types import Cell, DatasetReport

logger = logging.getLogger(__name__)


def format_real(value: float) -> str:
    """Return ``value`` with 17 significant digits, trailing zeros kept."""
    return f"{value:#.17g}"


def _csv_cell(value: Cell) -> str:
    if isinstance(value, float):
        return format_real(value)
    return str(value)


def _json_cell(value: Cell) -> str:
    if isinstance(value, float):
        if not math.isfinite(value):
            msg = f"Out of range float value {value!r} is not JSON compliant"
            raise ValueError(msg)
        return format_real(value)
    return json.dumps(value)


def _json_list(cells: cabc.Iterable[Cell]) -> str:
    return f"[{', '.join(_json_cell(cell) for cell in cells)}]"


@dc.dataclass(frozen=True, slots=True)
class Dataset:
    """Tabular result of one command plus its one-line summary."""

    columns: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]
    summary: str

    def __post_init__(self) -> None:
        """Check that every row matches the header."""
        width = len(self.columns)
        for index, row in enumerate(self.rows):
            if len(row) != width:
                msg = f"Row {index} has {len(row)} cells, expected {width}"
                raise ValueError(msg)

    def report(self, command: str) -> DatasetReport:
        """Return the JSON document for this dataset."""
        return {
            "command": command,
            "columns": list(self.columns),
            "rows": [list(row) for row in self.rows],
            "summary": self.summary,
        }


def render_report(report: DatasetReport) -> str:
    """Return ``report`` as JSON text, one row per line.

    ``json.dumps`` writes the shortest round-trip form of a float, so reals
    are rendered through :func:`format_real` instead.

    Raises
    ------
    ValueError
        If a row holds NaN or an infinity.

    """
    rows = ",\n".join(f"    {_json_list(row)}" for row in report["rows"])
    body = f"[\n{rows}\n  ]" if rows else "[]"
    return (
        "{\n"
        f'  "command": {json.dumps(report["command"])},\n'
        f'  "columns": {_json_list(report["columns"])},\n'
        f'  "rows": {body},\n'
        f'  "summary": {json.dumps(report["summary"])}\n'
        "}\n"
    )


def write_csv(path: Path, dataset: Dataset) -> None:
    """Write ``dataset`` as CSV with a header row."""
    with path.open("w", encoding="utf-8", newline="") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(dataset.columns)
        writer.writerows([_csv_cell(cell) for cell in row] for row in dataset.rows)
    logger.info("Wrote %d rows to %s", len(dataset.rows), path)


def write_json(path: Path, dataset: Dataset, command: str) -> None:
    """Write ``dataset`` as a :class:`~rotorbell.types.DatasetReport`."""
    text = render_report(dataset.report(command))
    path.write_text(text, encoding="utf-8", newline="")
    logger.info("Wrote %d rows to %s", len(dataset.rows), path)


__all__ = ["Dataset", "format_real", "render_report", "write_csv", "write_json"]

"""Type definitions for rotorbell.

These types describe the JSON documents written by the command-line front
end and the flat run-file mapping it reads. The report schema is documented
in ``docs/users-guide.md``.
"""

from __future__ import annotations

import typing as typ

type Cell = int | float | str


class DatasetReport(typ.TypedDict):
    """JSON document emitted for every command.

    ``rows`` holds one list per CSV row, aligned with ``columns``.
    """

    command: str
    columns: list[str]
    rows: list[list[Cell]]
    summary: str


class RunFileConfig(typ.TypedDict, total=False):
    """Keys accepted in the flat TOML run file."""

    M: int
    grid_points: int
    delta_theta: float
    eta: float
    M_list: list[int]
    phases: list[float]
    output: str
    format: str
    log_level: str
    max_truncation: int
    workers: int


__all__ = ["Cell", "DatasetReport", "RunFileConfig"]

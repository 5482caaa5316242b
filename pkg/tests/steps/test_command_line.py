"""Behaviour tests for the rotorbell command-line datasets.

The JSON scenario compares a generated report with the example document in
the "JSON reports" section of ``docs/users-guide.md``.
"""

from __future__ import annotations

import csv
import json
import re
import typing as typ
from pathlib import Path

import pytest
from pytest_bdd import given, parsers, scenarios, then, when

from rotorbell.cli import main
from rotorbell.types import DatasetReport

scenarios("../features/command_line.feature")

_EXAMPLE_PATTERN = re.compile(
    r"## JSON reports.*?```json\n(?P<body>.*?)```", flags=re.DOTALL
)


class CommandContext(typ.TypedDict):
    """Shared state for command-line scenarios."""

    directory: Path | None
    output: Path | None
    status: int | None
    stderr: str


@pytest.fixture
def command_context() -> CommandContext:
    """Provide empty command state."""
    return {"directory": None, "output": None, "status": None, "stderr": ""}


def repo_root() -> Path:
    """Return the repository root path."""
    return Path(__file__).resolve().parents[2]


def _run(
    command_context: CommandContext,
    capsys: pytest.CaptureFixture[str],
    argv: list[str],
    filename: str,
) -> None:
    directory = command_context["directory"]
    assert directory is not None, "no output directory configured"
    output = directory / filename
    command_context["output"] = output
    command_context["status"] = main([*argv, f"--output={output}"])
    command_context["stderr"] = capsys.readouterr().err


@given("an empty output directory")
def given_output_directory(command_context: CommandContext, tmp_path: Path) -> None:
    """Use a fresh temporary directory for outputs."""
    command_context["directory"] = tmp_path


@when("I run rotorbell scan with truncation 2 on a 41-point grid")
def when_scan(
    command_context: CommandContext, capsys: pytest.CaptureFixture[str]
) -> None:
    """Run a scan at ``M = 2`` on a 41 x 41 grid."""
    _run(
        command_context,
        capsys,
        ["scan", "--M", "2", "--grid-points", "41"],
        "scan.csv",
    )


@when("I run rotorbell converge for truncations 1, 2 and 3 as JSON")
def when_converge_json(
    command_context: CommandContext, capsys: pytest.CaptureFixture[str]
) -> None:
    """Run a convergence study with JSON output."""
    _run(
        command_context,
        capsys,
        ["converge", "--M-list", "1,2,3", "--format", "json"],
        "converge.json",
    )


@when("I run rotorbell scan with a one-point grid")
def when_scan_invalid(
    command_context: CommandContext, capsys: pytest.CaptureFixture[str]
) -> None:
    """Run a scan with an invalid grid size."""
    _run(
        command_context,
        capsys,
        ["scan", "--M", "2", "--grid-points", "1"],
        "invalid.csv",
    )


@then("the command succeeds")
def then_success(command_context: CommandContext) -> None:
    """Exit status is zero."""
    assert command_context["status"] == 0, command_context["stderr"]


@then(parsers.parse("the command exits with status {status:d}"))
def then_status(command_context: CommandContext, status: int) -> None:
    """Exit status matches."""
    assert command_context["status"] == status


@then(parsers.parse("the error message names {field}"))
def then_error_names(command_context: CommandContext, field: str) -> None:
    """The stderr message mentions the offending field."""
    assert field in command_context["stderr"], command_context["stderr"]


@then(
    parsers.parse(
        "the CSV file has {count:d} data rows under the header xi_a, xi_b, b_max"
    )
)
def then_csv_rows(command_context: CommandContext, count: int) -> None:
    """The CSV header and row count match the grid."""
    output = command_context["output"]
    assert output is not None, "no output written"
    with output.open(encoding="utf-8", newline="") as stream:
        rows = list(csv.reader(stream))
    assert rows[0] == ["xi_a", "xi_b", "b_max"]
    assert len(rows) - 1 == count


@then("the JSON report matches the schema in the users guide")
def then_json_schema(command_context: CommandContext) -> None:
    """The report has the documented keys and value shapes."""
    guide = (repo_root() / "docs" / "users-guide.md").read_text(encoding="utf-8")
    match = _EXAMPLE_PATTERN.search(guide)
    assert match is not None, "users guide lacks a JSON report example"
    example = json.loads(match.group("body"))

    output = command_context["output"]
    assert output is not None, "no output written"
    report = json.loads(output.read_text(encoding="utf-8"))

    documented = set(typ.get_type_hints(DatasetReport))
    assert set(example) == documented, f"guide example keys {sorted(example)}"
    assert set(report) == documented, f"report keys {sorted(report)}"
    for key in documented:
        assert type(report[key]) is type(example[key]), f"{key} has the wrong type"
    assert all(len(row) == len(report["columns"]) for row in report["rows"])

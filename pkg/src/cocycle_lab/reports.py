"""CSV and JSON report rendering.

Every report carries a versioned schema line, fixed columns and a failure
list. Output is deterministic: no timestamps, floats at 12 significant
digits.
"""

import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Any

import typer

from cocycle_lab.config import CSV_SCHEMA_VERSION, RNG_ALGORITHM
from cocycle_lab.utils import format_float, log, round_float
from cocycle_lab.version import PACKAGE_VERSION

FORMATS = ("csv", "json")


@dataclass
class Report:
    """Rows of one command run plus the failures that decide its exit code."""

    command: str
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def add_row(self, **values: Any) -> None:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown report columns: {', '.join(sorted(unknown))}")
        self.rows.append(values)

    def fail(self, message: str) -> None:
        self.failures.append(message)


def schema_line(command: str) -> str:
    return f"# cocycle-lab {command} schema v{CSV_SCHEMA_VERSION}"


def _csv_cell(value: Any) -> str:
    """Pure function: booleans as true/false, floats at 12 digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return round_float(value)
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def render_csv(report: Report) -> str:
    buffer = io.StringIO()
    buffer.write(schema_line(report.command) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_csv_cell(row.get(column)) for column in report.columns])
    for failure in report.failures:
        buffer.write(f"# failure: {failure}\n")
    return buffer.getvalue()


def render_json(report: Report) -> str:
    document = {
        "schema": f"cocycle-lab/{report.command}/v{CSV_SCHEMA_VERSION}",
        "version": PACKAGE_VERSION,
        "metadata": _json_value({"rng": RNG_ALGORITHM, **report.metadata}),
        "columns": report.columns,
        "rows": [_json_value({column: row.get(column) for column in report.columns}) for row in report.rows],
        "failures": list(report.failures),
    }
    return json.dumps(document, indent=2, sort_keys=False) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "csv":
        return render_csv(report)
    if fmt == "json":
        return render_json(report)
    raise ValueError(f"unknown output format '{fmt}'")


def emit(report: Report, fmt: str, out: str = "") -> None:
    """Write the report to --out (or stdout) and exit 1 if anything failed."""
    text = render(report, fmt)
    if out:
        directory = os.path.dirname(out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        log(report.command, f"Wrote {len(report.rows)} row(s) to {out}", style="dim")
    else:
        typer.echo(text, nl=False)

    if report.failures:
        log(report.command, f"{len(report.failures)} check(s) failed:", style="bold red")
        for failure in report.failures:
            log(report.command, f"  - {failure}", style="red")
        raise typer.Exit(1)
    log(report.command, "All checks passed.", style="green")

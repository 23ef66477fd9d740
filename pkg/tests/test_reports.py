"""Tests for CSV/JSON report rendering and exit codes."""

import json

import pytest
import typer

from cocycle_lab.reports import Report, emit, render, render_csv, render_json, schema_line
from cocycle_lab.version import PACKAGE_VERSION


def _report():
    report = Report("analyze", ["component", "h", "regular", "lambda1"])
    report.add_row(component=0, h="1/2", regular=True, lambda1=2 - 2 ** 0.5)
    report.add_row(component=1, h="", regular=False, lambda1=None)
    return report


# --- CSV ---

def test_csv_starts_with_schema_line_and_header():
    lines = render_csv(_report()).splitlines()
    assert lines[0] == "# cocycle-lab analyze schema v1"
    assert lines[1] == "component,h,regular,lambda1"
    assert lines[2] == "0,1/2,true,0.585786437627"
    assert lines[3] == "1,,false,"


def test_csv_failures_follow_rows():
    report = _report()
    report.fail("component 1: something broke")
    lines = render_csv(report).splitlines()
    assert lines[-1] == "# failure: component 1: something broke"
    assert not report.passed


def test_unknown_column_is_rejected():
    with pytest.raises(KeyError):
        _report().add_row(component=2, cheeger=1)


# --- JSON ---

def test_json_document_structure():
    report = _report()
    report.metadata = {"seed": 7, "threshold": 0.1}
    document = json.loads(render_json(report))
    assert document["schema"] == "cocycle-lab/analyze/v1"
    assert document["version"] == PACKAGE_VERSION
    assert document["metadata"]["rng"] == "numpy.random.PCG64"
    assert document["metadata"]["seed"] == 7
    assert document["columns"] == ["component", "h", "regular", "lambda1"]
    assert document["rows"][0]["lambda1"] == 0.585786437627
    assert document["rows"][1]["lambda1"] is None
    assert document["failures"] == []


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        render(_report(), "xml")


def test_schema_line_names_command():
    assert schema_line("diverge") == "# cocycle-lab diverge schema v1"


# --- emit ---

def test_emit_writes_file_and_returns_on_success(tmp_path):
    path = tmp_path / "out" / "report.csv"
    emit(_report(), "csv", str(path))
    assert path.read_text().startswith("# cocycle-lab analyze")


def test_emit_exits_with_one_after_writing_failures(tmp_path):
    report = _report()
    report.fail("bounds violated")
    path = tmp_path / "report.json"
    with pytest.raises(typer.Exit) as excinfo:
        emit(report, "json", str(path))
    assert excinfo.value.exit_code == 1
    assert json.loads(path.read_text())["failures"] == ["bounds violated"]

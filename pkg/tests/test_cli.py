"""End-to-end tests for the cocycle-lab commands, reading reports from --out files."""

import json

import pytest
from typer.testing import CliRunner

from cocycle_lab.cli import app
from cocycle_lab.graphgen import cycle_rep
from cocycle_lab.perm_rep import load_representation
from cocycle_lab.version import PACKAGE_VERSION

runner = CliRunner()


def _run(*args):
    return runner.invoke(app, [str(arg) for arg in args])


def _json_report(tmp_path, *args, name="report.json"):
    out = tmp_path / name
    result = _run(*args, "--format", "json", "--out", out)
    document = json.loads(out.read_text()) if out.exists() else None
    return result, document


# --- analyze ---

def test_analyze_cycle_eight(tmp_path):
    result, document = _json_report(tmp_path, "analyze", "--family", "cycle 8", "--p", 2)
    assert result.exit_code == 0
    row = document["rows"][0]
    assert row["h"] == "1/2"
    assert row["bounds"] == "ok"
    assert row["lambda1"] == pytest.approx(0.585786437627, abs=1e-9)
    assert row["c_2"] == pytest.approx(0.585786437627, abs=1e-6)
    assert document["metadata"]["expander_family"] is True
    assert document["metadata"]["regime"] == "bounded"


def test_analyze_margulis_single_component(tmp_path):
    result, document = _json_report(tmp_path, "analyze", "--family", "margulis 3")
    assert result.exit_code == 0
    assert len(document["rows"]) == 1
    assert document["rows"][0]["size"] == 9
    assert document["columns"][-1] == "bounds"


def test_analyze_empty_representation(tmp_path):
    rep = tmp_path / "empty.json"
    rep.write_text('{"n": 0, "generators": []}')
    result, document = _json_report(tmp_path, "analyze", "--input", rep)
    assert result.exit_code == 0
    assert document["rows"] == []


def test_analyze_csv_output(tmp_path):
    out = tmp_path / "cycle.csv"
    result = _run("analyze", "--family", "cycle 6", "--out", out)
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# cocycle-lab analyze schema v1"
    assert lines[2].startswith("0,6,2,true,2/3,")


def test_analyze_rejects_input_and_family_together(tmp_path):
    rep = tmp_path / "rep.json"
    rep.write_text('{"n": 0, "generators": []}')
    assert _run("analyze", "--input", rep, "--family", "cycle 5").exit_code == 2


def test_analyze_rejects_exponent_one():
    assert _run("analyze", "--family", "cycle 5", "--p", 1).exit_code == 2


def test_malformed_input_exits_with_one(tmp_path):
    rep = tmp_path / "broken.json"
    rep.write_text('{"n": 3, "generators": [')
    out = tmp_path / "report.csv"
    result = _run("analyze", "--input", rep, "--out", out)
    assert result.exit_code == 1
    assert not out.exists()


def test_analyze_is_byte_identical_for_same_seed(tmp_path):
    args = ("analyze", "--family", "random-regular 12 2", "--seed", 3, "--p", 3, "--format", "json")
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert _run(*args, "--out", first).exit_code == 0
    assert _run(*args, "--out", second).exit_code == 0
    assert first.read_bytes() == second.read_bytes()


@pytest.mark.parametrize("args", [
    ("cocycle", "--family", "cycle 7", "--from-vector", "random"),
    ("diverge", "--depths", "1,2,3"),
    ("interpolate", "--family", "random-regular 10 2", "--p", 1.5, "--q", 3, "--samples", 2),
    ("classify", "--family", "bounded 2", "--samples", 2),
])
def test_reports_are_byte_identical_for_same_seed(tmp_path, args):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert _run(*args, "--seed", 5, "--format", "json", "--out", first).exit_code == 0
    assert _run(*args, "--seed", 5, "--format", "json", "--out", second).exit_code == 0
    assert first.read_bytes() == second.read_bytes()


def test_random_regular_with_too_many_generators_exits_with_one(tmp_path):
    out = tmp_path / "report.csv"
    result = _run("analyze", "--family", "random-regular 4 4", "--out", out)
    assert result.exit_code == 1
    assert not out.exists()


# --- cocycle ---

def test_cocycle_from_random_vector_is_recovered(tmp_path):
    result, document = _json_report(tmp_path, "cocycle", "--family", "cycle 6", "--from-vector", "random")
    assert result.exit_code == 0
    row = document["rows"][0]
    assert row["identity_ok"] is True
    assert row["solved"] is True
    assert row["recovery_error"] < 1e-8
    assert document["failures"] == []
    assert len(document["metadata"]["vector"]["coords"]) == 6
    assert document["metadata"]["solution"]["solved"] is True
    assert list(document["metadata"]["solution"]["shifts"]) == ["0"]


def test_zero_cocycle_has_zero_solution(tmp_path):
    cocycle = tmp_path / "zero.json"
    cocycle.write_text(json.dumps({"p": 2, "values": {"s": [0.0] * 5, "s^-1": [0.0] * 5}}))
    result, document = _json_report(tmp_path, "cocycle", "--family", "cycle 5", "--cocycle", cocycle)
    assert result.exit_code == 0
    row = document["rows"][0]
    assert row["solved"] is True
    assert row["qnorm"] == 0.0


def test_nonexpander_family_supplies_arc_cocycle(tmp_path):
    result, document = _json_report(tmp_path, "cocycle", "--family", "nonexpander 2", "--q", 4)
    assert result.exit_code == 0
    assert document["metadata"]["cocycle"] == "nonexpander arc cocycle"
    assert document["metadata"]["q"] == 4.0
    assert document["rows"][0]["solved"] is True


def test_nonexpander_depth_eight_cocycle_is_solved(tmp_path):
    result, document = _json_report(tmp_path, "cocycle", "--family", "nonexpander 8")
    assert result.exit_code == 0
    row = document["rows"][0]
    assert row["identity_ok"] is True
    assert row["solved"] is True
    assert document["metadata"]["source"]["nonexpander"]["sizes"] == [(n + 2) ** 2 for n in range(1, 9)]


def test_cocycle_without_source_exits_with_one(tmp_path):
    out = tmp_path / "report.csv"
    assert _run("cocycle", "--family", "cycle 5", "--out", out).exit_code == 1


def test_cocycle_with_mismatched_generators_exits_with_one(tmp_path):
    cocycle = tmp_path / "wrong.json"
    cocycle.write_text(json.dumps({"p": 2, "values": {"t": [0.0] * 5}}))
    assert _run("cocycle", "--family", "cycle 5", "--cocycle", cocycle).exit_code == 1


# --- diverge ---

def test_diverge_rows_hold_and_increase(tmp_path):
    result, document = _json_report(tmp_path, "diverge", "--depths", "1,2,4")
    assert result.exit_code == 0
    assert [row["depth"] for row in document["rows"]] == [1, 2, 4]
    assert all(row["holds"] for row in document["rows"])
    values = [row["qnorm_q"] for row in document["rows"]]
    assert values == sorted(values) and len(set(values)) == 3
    assert document["metadata"]["families"][0]["sizes"] == [9]


def test_diverge_rejects_non_integer_depths():
    assert _run("diverge", "--depths", "1,x").exit_code == 2


# --- interpolate ---

def test_interpolate_requires_p_below_q():
    assert _run("interpolate", "--family", "cycle 8", "--p", 4, "--q", 4).exit_code == 2


def test_interpolate_on_spike_vector(tmp_path):
    vector = tmp_path / "v.json"
    vector.write_text(json.dumps([16.0, 1.0] + [0.0] * 6))
    result, document = _json_report(tmp_path, "interpolate", "--family", "cycle 8", "--vector", vector)
    assert result.exit_code == 0
    assert [row["generator"] for row in document["rows"]] == ["s", "s^-1"]
    assert all(row["holds"] and row["ratio"] <= 1 for row in document["rows"])
    assert all(row["zero_components"] == 0 and row["fixed_violation"] < 1e-8 for row in document["rows"])


def test_interpolate_random_samples(tmp_path):
    result, document = _json_report(tmp_path, "interpolate", "--family", "random-regular 10 2",
                                    "--p", 1.5, "--q", 3, "--samples", 3)
    assert result.exit_code == 0
    assert {row["sample"] for row in document["rows"]} == {0, 1, 2}


def test_interpolate_counts_components_where_fixed_part_vanishes(tmp_path):
    rep = tmp_path / "two_cycles.json"
    rep.write_text(json.dumps({"n": 6, "generators": [{"name": "g", "targets": [1, 2, 0, 4, 5, 3]}]}))
    vector = tmp_path / "v.json"
    vector.write_text(json.dumps([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]))
    result, document = _json_report(tmp_path, "interpolate", "--input", rep, "--vector", vector)
    assert result.exit_code == 0
    row = document["rows"][0]
    assert row["generator"] == "g"
    assert row["zero_components"] == 1
    assert row["fixed_violation"] == 0.0


# --- classify ---

def test_classify_bounded_family(tmp_path):
    result, document = _json_report(tmp_path, "classify", "--family", "bounded 4")
    assert result.exit_code == 0
    assert len(document["metadata"]["classes"]) == 3
    row = document["rows"][0]
    assert row["components"] == 12
    assert row["chain_ok"] is True
    assert document["metadata"]["covering_set"]["order"] == row["q_order"]


def test_classify_rejects_component_above_bound(tmp_path):
    out = tmp_path / "report.csv"
    assert _run("classify", "--family", "cycle 9", "--out", out).exit_code == 1


# --- generate ---

def test_generate_writes_representation_and_sidecar(tmp_path):
    rep_path, meta_path = tmp_path / "rep.json", tmp_path / "meta.json"
    result = _run("generate", "cycle 5", "--out", rep_path, "--meta", meta_path)
    assert result.exit_code == 0
    assert load_representation(str(rep_path)) == cycle_rep(5)
    meta = json.loads(meta_path.read_text())
    assert meta["family"] == "cycle"
    assert meta["version"] == PACKAGE_VERSION


def test_generated_file_feeds_analyze(tmp_path):
    rep_path = tmp_path / "rep.json"
    assert _run("generate", "random-regular 12 2", "--seed", 11, "--out", rep_path).exit_code == 0
    result, document = _json_report(tmp_path, "analyze", "--input", rep_path)
    assert result.exit_code == 0
    assert sum(row["size"] for row in document["rows"]) == 12


def test_generate_unknown_family_exits_with_one():
    assert _run("generate", "torus 4").exit_code == 1


# --- version ---

def test_version_flag():
    result = _run("--version")
    assert result.exit_code == 0
    assert PACKAGE_VERSION in result.output
    assert "numpy" in result.output and "scipy" in result.output


def test_version_falls_back_without_installed_metadata(monkeypatch):
    from importlib.metadata import PackageNotFoundError

    from cocycle_lab import version

    def _missing(name):
        raise PackageNotFoundError(name)

    monkeypatch.setattr(version, "version", _missing)
    assert version._installed_version() == version.FALLBACK_VERSION

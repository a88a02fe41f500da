import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from tiltgen.cli import (ConfigError, ReportDocument, parse_config, render_config, reproduce_preset,
                         run_command)

T1_B2 = {
    "space": {"blowup_p2": {"centers": [{"coords": [1, 0, 0]}, {"coords": ["0", "1", "0"]}]}},
    "collection": [{"line_bundle": [0, 0, 0]}, {"line_bundle": [0, 1, 0]}, {"line_bundle": [0, 0, 1]},
                   {"line_bundle": [1, 0, 0]}, {"line_bundle": [2, 0, 0]}],
    "options": {"anticanonical_smooth_member": True},
}


def _write(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def test_minimal_config_parses():
    doc = parse_config('{"space":{"blowup_p2":{"centers":[]}},"collection":[{"line_bundle":[0]}]}')
    assert doc.space_kind == "blowup_p2"
    assert len(doc.build_collection()) == 1


def test_duplicate_centers_are_path_qualified():
    with pytest.raises(ConfigError) as e:
        parse_config(json.dumps({"space": {"blowup_p2": {"centers": [
            {"coords": [1, 2, 3]}, {"coords": ["2", 4, 6]}]}}, "collection": [{"line_bundle": [0, 0, 0]}]}))
    assert any(m.startswith("$.space.blowup_p2.centers") for m in e.value.errors)


def test_tangent_on_proper_point_is_a_schema_error():
    with pytest.raises(ConfigError) as e:
        parse_config(json.dumps({"space": {"blowup_p2": {"centers": [
            {"coords": [1, 0, 0], "tangent": [1, 0]}]}}, "collection": [{"line_bundle": [0, 0]}]}))
    assert "$.space.blowup_p2.centers[0].tangent: unknown field" in e.value.errors


@pytest.mark.parametrize("text, fragment", [
    ("{", "malformed JSON"),
    ('{"collection": []}', "$.space: missing"),
    ('{"space": {"weighted": {"weights": [1, 0]}}, "collection": [{"line_bundle": [0]}]}',
     "$.space.weighted.weights[1]"),
    ('{"space": {"proj_bundle": {"m": 1, "n": 1}}, "collection": [{"line_bundle": [0]}]}',
     "$.collection[0].line_bundle: expected 2"),
    ('{"space": {"blowup_p2": {"centers": [{"coords": ["1/0", 0, 1]}]}}, "collection": [{"line_bundle": [0, 0]}]}',
     "coords[0]"),
    ('{"space": {"blowup_p2": {"centers": [{"coords": ["1/-2", 0, 1]}]}}, "collection": [{"line_bundle": [0, 0]}]}',
     "is not a rational"),
    ('{"space": {"proj_bundle": {"m": 1, "n": 1}}, "collection": [{"exceptional_twist": {"curve": 1}}]}',
     "need a blowup_p2 space"),
    ('{"space": {"toric": {"rays": [[1, 0], [0, 1]]}}, "collection": [{"line_bundle": [0, 0]}]}',
     "$.space.toric.rays"),
    ('{"space": {"weighted": {"weights": [1, 1, 4]}}, "collection": [{"line_bundle": [0]}], '
     '"options": {"p_cap": 0}}', "$.options.p_cap"),
])
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError) as e:
        parse_config(text)
    assert any(fragment in m for m in e.value.errors), e.value.errors


def test_render_round_trip_examples():
    for obj in (T1_B2,
                {"space": {"proj_bundle": {"m": 4, "n": 1}}, "collection": [{"line_bundle": [0, 0]}]},
                {"space": {"toric": {"rays": [[1, 0], [0, 1], [-1, 4], [0, -1]]}},
                 "collection": [{"line_bundle": [0, 0, 0, 0]}, {"line_bundle": [0, 0, 0, 1]}]},
                {"space": {"blowup_p2": {"centers": [{"coords": ["1/2", 0, 1]}, {"parent": 0, "tangent": [1, "2/3"]}]}},
                 "collection": [{"line_bundle": [0, 0, 0]}, {"exceptional_twist": {"curve": 2, "k": -1}}]}):
        doc = parse_config(json.dumps(obj))
        assert parse_config(render_config(doc)) == doc


@given(st.lists(st.integers(1, 9), min_size=2, max_size=4), st.integers(1, 40), st.booleans())
def test_render_round_trip_weighted(weights, p_cap, flag):
    obj = {"space": {"weighted": {"weights": weights}}, "collection": [{"line_bundle": [0]}, {"line_bundle": [1]}],
           "options": {"p_cap": p_cap, "anticanonical_smooth_member": flag}}
    doc = parse_config(json.dumps(obj))
    assert parse_config(render_config(doc)) == doc


def test_gentime_json(tmp_path, capsys):
    cfg = _write(tmp_path, T1_B2)
    assert run_command(["gentime", "--config", cfg, "--json"]) == 0
    out = capsys.readouterr().out
    doc = ReportDocument.from_json(out)
    assert doc.body["hochschild_dim"] == 2  # [PAPER]
    assert "timestamp" not in doc.provenance
    assert doc.to_json() == out
    # byte-identical on rerun
    assert run_command(["gentime", "--config", cfg, "--json"]) == 0
    assert capsys.readouterr().out == out


def test_text_report_carries_timestamp(tmp_path, capsys):
    cfg = _write(tmp_path, T1_B2)
    assert run_command(["cohomology", "--config", cfg]) == 0
    out = capsys.readouterr().out
    assert "O(2H)" in out and "(6, 0, 0)" in out
    assert "# tiltgen" in out


def test_check_and_ext(tmp_path, capsys):
    cfg = _write(tmp_path, T1_B2)
    assert run_command(["check", "--config", cfg]) == 0
    assert "pullback:           true" in capsys.readouterr().out
    assert run_command(["ext", "--config", cfg, "--json"]) == 0
    body = json.loads(capsys.readouterr().out)["report"]
    assert body["ext_table"][0][4] == [6, 0, 0]
    bad = dict(T1_B2, collection=[{"line_bundle": [0, 0, 0]}, {"line_bundle": [-1, 0, 0]}])
    assert run_command(["check", "--config", _write(tmp_path, bad, "bad.json")]) == 1


def test_usage_errors(tmp_path, capsys):
    assert run_command([]) == 2
    assert run_command(["gentime"]) == 2
    assert run_command(["gentime", "--config", str(tmp_path / "missing.json")]) == 2
    assert run_command(["gentime", "--config", _write(tmp_path, "{", "broken.json")]) == 2
    assert run_command(["reproduce", "nonsense"]) == 2
    assert run_command(["gentime", "--config", _write(tmp_path, T1_B2), "--p-cap", "0"]) == 2
    err = capsys.readouterr().err
    assert "malformed JSON" in err


def test_oracle_compare(capsys):
    assert run_command(["oracle-compare", "--space", "f4", "--range", "5"]) == 0
    assert "0 discrepancies" in capsys.readouterr().out  # [DERIVED]


def test_reproduce_hirzebruch(capsys):
    assert run_command(["reproduce", "hirzebruch"]) == 0  # [PAPER]
    out = capsys.readouterr().out
    assert "X6,3" in out and "match" in out


def test_reproduce_documents():
    doc = reproduce_preset("t1")
    assert doc.body["results"]["B3-collinear"] == 3  # [PAPER]
    doc = reproduce_preset("weighted")
    assert doc.body["results"]["1,1,4"] == 2  # [PAPER]
    assert ReportDocument.from_json(doc.to_json()) == doc


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "tiltgen", "reproduce", "quiver-f4", "--json"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["report"]["mismatches"] == []

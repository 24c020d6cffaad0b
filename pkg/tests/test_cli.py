import json
from pathlib import Path

from click.testing import CliRunner

from groupmcda.cli import main

from conftest import FIXTURES

runner = CliRunner()


def invoke(*args):
    return runner.invoke(main, list(args))


def test_validate_certain_fixture_clean():
    res = invoke("validate", str(FIXTURES / "certain.json"))
    assert res.exit_code == 0
    assert json.loads(res.output) == {"violations": []}


def test_validate_reports_errors_with_exit_one(tmp_path):
    doc = json.loads((FIXTURES / "certain.json").read_text())
    doc["problem"]["makers"][0]["weight"] = 0.5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    res = invoke("validate", str(bad))
    assert res.exit_code == 1
    codes = {v["code"] for v in json.loads(res.output)["violations"]}
    assert "WEIGHT_SUM" in codes


def test_validate_rejects_unknown_fields(tmp_path):
    doc = json.loads((FIXTURES / "certain.json").read_text())
    doc["problem"]["surprise"] = True
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    res = invoke("validate", str(bad))
    assert res.exit_code == 1
    assert json.loads(res.output)["error"] == "PARSE_ERROR"


def test_classify_fixtures():
    for name, expected in (
        ("certain.json", "certain"),
        ("fuzzy.json", "fuzzy"),
        ("stochastic.json", "stochastic"),
        ("rough.json", "rough"),
    ):
        res = invoke("classify", str(FIXTURES / name))
        assert res.exit_code == 0, res.output
        doc = json.loads(res.output)
        assert doc["uncertaintyClass"] == expected
        assert doc["recommendedMethods"]


def test_rank_weighted_sum_golden():
    res = invoke("rank", str(FIXTURES / "certain.json"), "--method", "weighted_sum")
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["order"] == ["b", "a"]
    assert abs(doc["scores"]["a"] - 0.56) < 1e-9
    assert abs(doc["scores"]["b"] - 0.66) < 1e-9


def test_rank_unknown_method_is_usage_error():
    res = invoke("rank", str(FIXTURES / "certain.json"), "--method", "nosuch")
    assert res.exit_code == 2


def test_rank_every_method_on_matching_fixture():
    cases = [
        ("certain.json", ["weighted_sum", "promethee2", "sir", "electre1"]),
        ("stochastic.json", ["expected_utility", "fsd", "monte_carlo_stability"]),
        ("fuzzy.json", ["ifwa_group"]),
        ("rough.json", ["drsa"]),
    ]
    for fixture, methods in cases:
        for method in methods:
            res = invoke(
                "rank", str(FIXTURES / fixture), "--method", method, "--samples", "200"
            )
            assert res.exit_code == 0, f"{fixture} {method}: {res.output}"
            doc = json.loads(res.output)
            assert sorted(doc["order"]) == ["a", "b"]


def test_pipeline_golden_fixture(tmp_path):
    out = tmp_path / "report.json"
    res = invoke(
        "pipeline", str(FIXTURES / "certain.json"), "--out", str(out), "--deterministic"
    )
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert [s["stage"] for s in doc["stages"]] == [
        "environment",
        "problem",
        "group",
        "scheme",
        "conflict",
        "coordination",
    ]
    assert doc["result"]["order"] == ["b", "a"]
    assert json.loads(out.read_text()) == doc


def test_pipeline_deterministic_byte_identical():
    a = invoke("pipeline", str(FIXTURES / "certain.json"), "--deterministic")
    b = invoke("pipeline", str(FIXTURES / "certain.json"), "--deterministic")
    assert a.exit_code == b.exit_code == 0
    assert a.output == b.output


def test_pipeline_validation_failure_exits_one(tmp_path):
    doc = json.loads((FIXTURES / "certain.json").read_text())
    del doc["problem"]["judgments"][0]["cells"]["b"]["c2"]
    bad = tmp_path / "incomplete.json"
    bad.write_text(json.dumps(doc))
    res = invoke("pipeline", str(bad), "--deterministic")
    assert res.exit_code == 1
    out = json.loads(res.output)
    assert out["error"] == "VALIDATION_FAILED"
    assert [s["stage"] for s in out["stages"]] == ["environment", "problem"]


def test_pipeline_with_store_persists(tmp_path):
    store_dir = tmp_path / "kw"
    res = invoke(
        "pipeline",
        str(FIXTURES / "certain.json"),
        "--store",
        str(store_dir),
        "--deterministic",
    )
    assert res.exit_code == 0
    journal = (store_dir / "journal.ndjson").read_text().splitlines()
    ops = [json.loads(line)["op"] for line in journal]
    assert "scheme" in ops and "session" in ops
    # a second run retrieves the now-emitted scheme from the first
    res2 = invoke(
        "pipeline",
        str(FIXTURES / "certain.json"),
        "--store",
        str(store_dir),
        "--deterministic",
    )
    assert res2.exit_code == 0
    doc = json.loads(res2.output)
    scheme_stage = next(s for s in doc["stages"] if s["stage"] == "scheme")
    similar = scheme_stage["payload"]["similarSchemes"]
    assert similar and abs(similar[0]["similarity"] - 1.0) < 1e-9


def test_consensus_command():
    res = invoke("consensus", str(FIXTURES / "fuzzy.json"), "--method", "ifwa_group")
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["consensusIndex"] == 1.0
    assert doc["conflicts"] == []


def test_whatif_command_golden():
    res = invoke(
        "whatif",
        str(FIXTURES / "certain.json"),
        "--method",
        "weighted_sum",
        "--criterion",
        "c1",
        "--delta",
        "0.0",
    )
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["flipped"] is False
    assert doc["newOrder"] == doc["baselineOrder"] == ["b", "a"]
    assert abs(0.6 + doc["minFlipDelta"] - 0.7) < 1e-3


def test_drsa_command():
    res = invoke("drsa", str(FIXTURES / "rough.json"))
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["gamma"] == 1.0
    assert doc["approximations"] and doc["rules"]


def test_drsa_requires_sorting_block():
    res = invoke("drsa", str(FIXTURES / "certain.json"))
    assert res.exit_code == 1
    assert json.loads(res.output)["error"] == "MISSING_SORTING_TABLE"


def test_report_command_writes_figures(tmp_path):
    out_dir = tmp_path / "out"
    res = invoke("report", str(FIXTURES / "certain.json"), "--out-dir", str(out_dir))
    assert res.exit_code == 0
    files = json.loads(res.output)["files"]
    assert {"report.json", "ranking.csv", "ranking.png", "consensus.csv", "consensus.png"} <= set(files)
    for name in files:
        path = out_dir / name
        assert path.exists() and path.stat().st_size > 0
    ranking = (out_dir / "ranking.csv").read_text().splitlines()
    assert ranking[0] == "alternative,score,position"
    assert ranking[1].startswith("b,") and ranking[2].startswith("a,")


def test_report_renders_flow_figure(tmp_path):
    out_dir = tmp_path / "flows"
    res = invoke(
        "report",
        str(FIXTURES / "certain.json"),
        "--out-dir",
        str(out_dir),
        "--method",
        "promethee2",
    )
    assert res.exit_code == 0
    assert (out_dir / "flows.png").exists()


def test_missing_file_is_usage_error():
    res = invoke("validate", "no-such-file.json")
    assert res.exit_code == 2

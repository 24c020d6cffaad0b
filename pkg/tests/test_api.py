import json
import threading

import pytest
from fastapi.testclient import TestClient

from groupmcda.api import create_app
from groupmcda.store import KnowledgeStore

from conftest import FIXTURES


@pytest.fixture
def client(tmp_path):
    store = KnowledgeStore(tmp_path / "kw")
    app = create_app(store)
    with TestClient(app) as c:
        yield c


def skeleton():
    doc = json.loads((FIXTURES / "certain.json").read_text())
    del doc["problem"]["judgments"]
    return doc


def judgment():
    doc = json.loads((FIXTURES / "certain.json").read_text())
    j = doc["problem"]["judgments"][0]
    return {"criterionWeights": j["criterionWeights"], "cells": j["cells"]}


def create_session(client) -> str:
    res = client.post("/api/sessions", json=skeleton())
    assert res.status_code == 201
    body = res.json()
    assert body["phase"] == "collecting"
    return body["id"]


def test_create_and_snapshot(client):
    sid = create_session(client)
    res = client.get(f"/api/sessions/{sid}")
    assert res.status_code == 200
    snap = res.json()
    assert snap["phase"] == "collecting"
    assert snap["pendingMakers"] == ["m1"]
    assert [a["id"] for a in snap["problem"]["alternatives"]] == ["a", "b"]


def test_unknown_session_404(client):
    assert client.get("/api/sessions/nope").status_code == 404
    assert client.post("/api/sessions/nope/run").status_code == 404


def test_unknown_maker_404(client):
    sid = create_session(client)
    res = client.put(f"/api/sessions/{sid}/judgments/mx", json=judgment())
    assert res.status_code == 404


def test_invalid_judgment_400(client):
    sid = create_session(client)
    bad = judgment()
    bad["cells"]["a"]["c1"] = {"kind": "ifs", "mu": 0.9, "nu": 0.9}
    res = client.put(f"/api/sessions/{sid}/judgments/m1", json=bad)
    assert res.status_code == 400


def test_unknown_judgment_fields_400(client):
    sid = create_session(client)
    body = judgment()
    body["color"] = "red"
    res = client.put(f"/api/sessions/{sid}/judgments/m1", json=body)
    assert res.status_code == 400


def test_run_before_complete_409(client):
    sid = create_session(client)
    res = client.post(f"/api/sessions/{sid}/run")
    assert res.status_code == 409
    assert client.get(f"/api/sessions/{sid}/result").status_code == 409


def full_run(client) -> tuple[str, dict]:
    sid = create_session(client)
    res = client.put(f"/api/sessions/{sid}/judgments/m1", json=judgment())
    assert res.status_code == 200
    assert res.json()["phase"] == "complete"
    run = client.post(f"/api/sessions/{sid}/run")
    assert run.status_code == 200
    return sid, run.json()


def test_full_session_flow(client):
    sid, report = full_run(client)
    assert report["result"]["order"] == ["b", "a"]
    assert [s["stage"] for s in report["stages"]] == [
        "environment",
        "problem",
        "group",
        "scheme",
        "conflict",
        "coordination",
    ]
    result = client.get(f"/api/sessions/{sid}/result")
    assert result.status_code == 200
    assert result.json() == report["result"]
    consensus = client.get(f"/api/sessions/{sid}/consensus")
    assert consensus.status_code == 200
    assert consensus.json()["consensusIndex"] == 1.0
    snap = client.get(f"/api/sessions/{sid}").json()
    assert snap["phase"] == "evaluated"


def test_run_twice_409(client):
    sid, _ = full_run(client)
    assert client.post(f"/api/sessions/{sid}/run").status_code == 409


def test_idempotent_judgment_upsert(client):
    sid = create_session(client)
    first = client.put(f"/api/sessions/{sid}/judgments/m1", json=judgment())
    snap1 = client.get(f"/api/sessions/{sid}").json()
    second = client.put(f"/api/sessions/{sid}/judgments/m1", json=judgment())
    snap2 = client.get(f"/api/sessions/{sid}").json()
    assert first.json() == second.json()
    assert snap1 == snap2


def test_whatif_zero_delta_matches_result(client):
    sid, report = full_run(client)
    res = client.post(f"/api/sessions/{sid}/whatif", json={"criterion": "c1", "delta": 0.0})
    assert res.status_code == 200
    body = res.json()
    assert body["flipped"] is False
    assert body["newOrder"] == report["result"]["order"]
    assert abs(0.6 + body["minFlipDelta"] - 0.7) < 1e-3


def test_whatif_bad_delta_400(client):
    sid, _ = full_run(client)
    res = client.post(f"/api/sessions/{sid}/whatif", json={"criterion": "c2", "delta": -0.9})
    assert res.status_code == 400
    assert res.json()["error"] == "WEIGHT_OUT_OF_RANGE"


def test_whatif_requires_evaluated(client):
    sid = create_session(client)
    res = client.post(f"/api/sessions/{sid}/whatif", json={"criterion": "c1", "delta": 0.1})
    assert res.status_code == 409


def test_schemes_similarity_endpoint(client):
    sid, _ = full_run(client)
    res = client.get(f"/api/schemes?similarTo={sid}&k=3")
    assert res.status_code == 200
    schemes = res.json()
    assert len(schemes) == 1
    assert schemes[0]["status"] == "emitted"
    assert abs(schemes[0]["similarity"] - 1.0) < 1e-9
    assert client.get("/api/schemes?similarTo=nope").status_code == 404


def test_session_persisted_to_store(client, tmp_path):
    sid, report = full_run(client)
    reopened = KnowledgeStore(tmp_path / "kw")
    stored = reopened.load_session(sid)
    assert stored["report"] == report
    assert stored["problem"]["problem"]["id"] == "supplier-shortlist"


def test_concurrent_judgments_from_distinct_makers(tmp_path):
    store = KnowledgeStore(tmp_path / "kw2")
    app = create_app(store)
    doc = skeleton()
    doc["problem"]["makers"] = [{"id": f"m{i}", "weight": 0.25} for i in range(4)]
    with TestClient(app) as client:
        res = client.post("/api/sessions", json=doc)
        sid = res.json()["id"]
        errors = []

        def submit(maker: str) -> None:
            try:
                r = client.put(f"/api/sessions/{sid}/judgments/{maker}", json=judgment())
                assert r.status_code == 200
            except Exception as exc:  # pragma: no cover - diagnostics
                errors.append(exc)

        threads = [threading.Thread(target=submit, args=(f"m{i}",)) for i in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        snap = client.get(f"/api/sessions/{sid}").json()
        assert snap["phase"] == "complete"
        assert snap["pendingMakers"] == []


def test_create_with_full_judgments_is_complete(client):
    doc = json.loads((FIXTURES / "certain.json").read_text())
    res = client.post("/api/sessions", json=doc)
    assert res.status_code == 201
    assert res.json()["phase"] == "complete"


def test_create_rejects_malformed_problem(client):
    res = client.post("/api/sessions", json={"problem": {"id": "x"}})
    assert res.status_code == 400

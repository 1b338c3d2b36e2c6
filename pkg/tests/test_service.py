import json
import random

import pytest
from fastapi.testclient import TestClient

from scoregraph.catalogs import builtin_catalog
from scoregraph.encoding import SessionOptions, WeakOrderOracle, drive_session, start_session
from scoregraph.graph import ConstraintGraph
from scoregraph.service import create_app, SessionStore

from conftest import elements, random_ranks, weak_order_graph


@pytest.fixture()
def catalog():
    return builtin_catalog("cvss-top65")


@pytest.fixture()
def client(tmp_path, catalog):
    app = create_app(tmp_path, {catalog.ref: catalog})
    with TestClient(app) as c:
        yield c


def scripted_http_run(client, catalog, oracle, seed, top=None, options_extra=None):
    """Drive a session over HTTP exactly like the browser console would."""
    options = {"rngSeed": seed, "allowEqual": True, "allowDegree2": True}
    options.update(options_extra or {})
    body = {"catalogRef": catalog.ref, "options": options}
    if top:
        body["top"] = top
    r = client.post("/api/v1/sessions", json=body)
    assert r.status_code == 201, r.text
    payload = r.json()
    sid = payload["sessionId"]
    while payload["state"] != "done":
        q = payload["question"]
        answer = oracle.compare(q["newElement"], q["probe"])
        r = client.post(
            f"/api/v1/sessions/{sid}/answers",
            json={"index": q["answerIndex"], "answer": answer.value},
        )
        assert r.status_code == 200, r.text
        payload = r.json()
    return sid


def test_http_session_equivalent_to_library_run(client, catalog):
    ids = list(catalog.elements)
    ranks = random_ranks(random.Random(55), ids, 0.25)
    oracle = WeakOrderOracle(ranks, much_gap=10)
    sid = scripted_http_run(client, catalog, oracle, seed=31)

    via_http = client.get(f"/api/v1/sessions/{sid}/graph").json()
    direct = drive_session(
        start_session(catalog.ref, ids, SessionOptions(rng_seed=31)), oracle
    ).graph()
    http_bytes = ConstraintGraph.from_json_dict(via_http).canonical_bytes()
    assert http_bytes == direct.canonical_bytes()


def test_question_rendering_and_progress(client, catalog):
    r = client.post(
        "/api/v1/sessions", json={"catalogRef": catalog.ref, "top": 5, "options": {"rngSeed": 1}}
    )
    payload = r.json()
    q = payload["question"]
    assert q["rendering"]["kind"] == "cvss"
    assert len(q["rendering"]["metrics"]) == 8
    assert payload["progress"]["answered"] == 0
    assert payload["progress"]["expectedMax"] > 0
    assert set(q["allowedAnswers"]) == {
        "much_less", "less", "equal", "greater", "much_greater"
    }


def test_options_restrict_allowed_answers(client, catalog):
    r = client.post(
        "/api/v1/sessions",
        json={
            "catalogRef": catalog.ref,
            "top": 3,
            "options": {"rngSeed": 1, "allowEqual": False, "allowDegree2": False},
        },
    )
    q = r.json()["question"]
    assert set(q["allowedAnswers"]) == {"less", "greater"}


def test_stale_answer_index_conflicts(client, catalog):
    r = client.post(
        "/api/v1/sessions", json={"catalogRef": catalog.ref, "top": 4, "options": {"rngSeed": 2}}
    )
    sid = r.json()["sessionId"]
    idx = r.json()["question"]["answerIndex"]
    ok = client.post(f"/api/v1/sessions/{sid}/answers", json={"index": idx, "answer": "greater"})
    assert ok.status_code == 200
    dup = client.post(f"/api/v1/sessions/{sid}/answers", json={"index": idx, "answer": "greater"})
    assert dup.status_code == 409
    assert dup.json()["detail"]["expectedIndex"] == idx + 1


def test_illegal_answer_rejected(client, catalog):
    r = client.post(
        "/api/v1/sessions",
        json={"catalogRef": catalog.ref, "top": 3, "options": {"rngSeed": 3, "allowEqual": False}},
    )
    sid = r.json()["sessionId"]
    res = client.post(f"/api/v1/sessions/{sid}/answers", json={"index": 0, "answer": "equal"})
    assert res.status_code == 422
    res = client.post(f"/api/v1/sessions/{sid}/answers", json={"index": 0, "answer": "sideways"})
    assert res.status_code == 422


def test_unknown_ids_give_404(client):
    assert client.get("/api/v1/sessions/nope").status_code == 404
    assert client.get("/api/v1/graphs/nope").status_code == 404
    assert client.get("/api/v1/catalogs/nope").status_code == 404


def test_unknown_elements_rejected(client, catalog):
    r = client.post(
        "/api/v1/sessions",
        json={"catalogRef": catalog.ref, "elements": ["bogus"], "options": {"rngSeed": 0}},
    )
    assert r.status_code == 422


def test_crash_recovery_replays_from_checkpoint(tmp_path, catalog):
    app = create_app(tmp_path, {catalog.ref: catalog})
    with TestClient(app) as client:
        r = client.post(
            "/api/v1/sessions",
            json={"catalogRef": catalog.ref, "top": 10, "options": {"rngSeed": 9}},
        )
        sid = r.json()["sessionId"]
        payload = r.json()
        oracle = WeakOrderOracle({e: i for i, e in enumerate(catalog.elements)})
        for _ in range(6):
            q = payload["question"]
            payload = client.post(
                f"/api/v1/sessions/{sid}/answers",
                json={"index": q["answerIndex"], "answer": oracle.compare(q["newElement"], q["probe"]).value},
            ).json()
        before_q = payload["question"]
        before_graph = client.get(f"/api/v1/sessions/{sid}/graph").json()

    # a fresh app over the same data directory sees the identical state
    app2 = create_app(tmp_path, {catalog.ref: catalog})
    with TestClient(app2) as client2:
        q = client2.get(f"/api/v1/sessions/{sid}/question").json()["question"]
        assert q == before_q
        assert client2.get(f"/api/v1/sessions/{sid}/graph").json() == before_graph
        assert client2.get(f"/api/v1/sessions/{sid}").json()["progress"]["answered"] == 6


def test_graph_store_is_content_addressed(client):
    g = weak_order_graph([["a"], ["b"], ["c"]], catalog_ref="mini")
    r1 = client.post("/api/v1/graphs", json=g.to_json_dict())
    r2 = client.post("/api/v1/graphs", json=g.to_json_dict())
    assert r1.status_code == 201
    assert r1.json()["graphId"] == r2.json()["graphId"]
    got = client.get(f"/api/v1/graphs/{r1.json()['graphId']}").json()
    assert ConstraintGraph.from_json_dict(got) == g


def test_unify_scores_pegs_prioritize_round_trip(client, catalog):
    ids = list(catalog.elements)[:20]
    oracle_ranks = {e: i // 2 for i, e in enumerate(ids)}
    gids = []
    for seed in (1, 2, 3):
        s = drive_session(
            start_session(catalog.ref, ids, SessionOptions(rng_seed=seed)),
            WeakOrderOracle(oracle_ranks),
        )
        r = client.post("/api/v1/graphs", json=s.graph().to_json_dict())
        gids.append(r.json()["graphId"])

    r = client.post("/api/v1/unify", json={"graphIds": gids})
    assert r.status_code == 200
    unified_id = r.json()["graphId"]
    report = r.json()["report"]
    assert report["applied"] + report["disputed"] + report["contradictory"] == 190

    config = {"min": 0, "max": 10, "dist1": 0.5, "dist2": 1.5, "decimals": 1}
    r = client.post(
        f"/api/v1/graphs/{unified_id}/scores", json={"config": config, "includeCurve": True}
    )
    assert r.status_code == 200
    sets = r.json()["assignment"]["perSet"]
    assert all(s["min"] - 1e-9 <= s["chosen"] <= s["max"] + 1e-9 for s in sets)
    assert r.json()["curve"], "curve samples expected"

    top = sets[-1]
    r = client.post(
        f"/api/v1/graphs/{unified_id}/pegs",
        json={"config": config, "pegs": {top["representative"]: top["max"]}},
    )
    assert r.status_code == 200
    pegged = [s for s in r.json()["assignment"]["perSet"] if s["pegged"]]
    assert len(pegged) == 1

    r = client.post(
        f"/api/v1/graphs/{unified_id}/pegs",
        json={"config": config, "pegs": {top["representative"]: top["max"] + 1.0}},
    )
    assert r.status_code == 422
    detail = r.json()["detail"]
    assert detail["validMax"] == pytest.approx(top["max"])

    r = client.get(f"/api/v1/graphs/{unified_id}/prioritization")
    assert r.status_code == 200
    assert r.json()["rendering"].startswith("[")


def test_unify_requires_two_graphs(client):
    r = client.post("/api/v1/unify", json={"graphIds": []})
    assert r.status_code == 422


def test_invalid_config_rejected(client):
    g = weak_order_graph([["a"], ["b"]], catalog_ref="mini")
    gid = client.post("/api/v1/graphs", json=g.to_json_dict()).json()["graphId"]
    r = client.post(
        f"/api/v1/graphs/{gid}/scores",
        json={"config": {"min": 0, "max": 10, "dist1": 0, "dist2": 1}},
    )
    assert r.status_code == 422


def test_session_store_atomic_checkpoints(tmp_path):
    store = SessionStore(tmp_path / "sessions")
    sid, session = store.create("cat", ["a", "b", "c"], SessionOptions(rng_seed=1))
    from scoregraph.encoding import Answer

    session.submit_answer(Answer.GREATER)
    store.checkpoint(sid)
    store.drop_cache()
    again = store.get(sid)
    assert again.answered_count == 1
    assert again.log_json_dict() == session.log_json_dict()

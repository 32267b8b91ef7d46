"""Review service semantics, HTTP endpoints, and static file serving."""

import http.client
import json
import threading

import httpx
import pytest

from autoquery.pipeline import (
    Config,
    run_answer,
    run_generate,
    run_ingest,
    run_objects,
    run_prune,
    run_sample,
)
from autoquery.service import ApiError, PAGE_SIZE, ReviewService, make_server
from autoquery.workspace import Workspace

TEXT = (
    "General Grant was in the US Civil War. "
    "General Grant led the Union Army. "
    "The Union Army crossed the river. "
    "The river flooded the valley."
)

CFG = Config(theta=0.3, min_count=1)


@pytest.fixture(scope="module")
def ws(tmp_path_factory):
    root = tmp_path_factory.mktemp("svc")
    corpus = root / "grant.txt"
    corpus.write_text(TEXT, encoding="utf-8")
    w = Workspace(root / "ws")
    run_ingest(w, CFG, corpus, "grant")
    run_objects(w, CFG)
    run_generate(w, CFG)
    run_prune(w, CFG)
    run_answer(w, CFG)
    run_sample(w, CFG, n=6, seed=1, stratify=True)
    return w


@pytest.fixture
def svc(ws, tmp_path):
    # clone the prepared workspace so label logs stay test-local
    import shutil

    clone = tmp_path / "ws"
    shutil.copytree(ws.root, clone)
    return ReviewService(Workspace(clone), CFG)


def label_payload(qid, reviewer="r1", category="UsefulInteresting", correct=None):
    return {
        "query_id": qid,
        "category": category,
        "answer_correct": correct,
        "reviewer": reviewer,
    }


class TestQueue:
    def test_requires_reviewer(self, svc):
        with pytest.raises(ApiError) as e:
            svc.next_item("")
        assert e.value.status == 400

    def test_no_sample_conflict(self, ws, tmp_path):
        bare = Workspace(tmp_path / "bare")
        corpus = tmp_path / "c.txt"
        corpus.write_text("The army crossed the river.", encoding="utf-8")
        run_ingest(bare, CFG, corpus, "c")
        run_objects(bare, CFG)
        run_generate(bare, CFG)
        s = ReviewService(bare, CFG)
        with pytest.raises(ApiError) as e:
            s.next_item("r1")
        assert e.value.status == 409
        with pytest.raises(ApiError) as e:
            s.submit_label(label_payload("anything"))
        assert e.value.status == 409

    def test_item_reserved_until_labeled(self, svc):
        first = svc.next_item("r1")
        again = svc.next_item("r1")
        assert first["query_id"] == again["query_id"]
        assert first["position"] == 0
        assert first["total"] == len(svc.sample_ids)
        svc.submit_label(label_payload(first["query_id"]))
        advanced = svc.next_item("r1")
        assert advanced["query_id"] != first["query_id"]
        assert advanced["position"] == 1

    def test_reviewers_have_independent_queues(self, svc):
        first = svc.next_item("r1")
        svc.submit_label(label_payload(first["query_id"], reviewer="r1"))
        assert svc.next_item("r2")["query_id"] == first["query_id"]
        assert svc.next_item("r1")["query_id"] != first["query_id"]

    def test_exhaustion_returns_none(self, svc):
        while True:
            item = svc.next_item("r1")
            if item is None:
                break
            svc.submit_label(label_payload(item["query_id"]))
        assert svc.next_item("r1") is None
        # a fresh reviewer still has the full queue
        assert svc.next_item("r2")["position"] == 0

    def test_item_shape(self, svc):
        item = svc.next_item("r1")
        for key in (
            "version",
            "query_id",
            "surface",
            "kind",
            "state",
            "rule_reason",
            "confidence",
            "candidate",
            "answer",
            "reverse_ok",
            "matched_terms",
            "position",
            "total",
        ):
            assert key in item
        assert item["version"] == 1


class TestSubmit:
    def test_bad_category(self, svc):
        qid = svc.sample_ids[0]
        with pytest.raises(ApiError) as e:
            svc.submit_label(label_payload(qid, category="Fine"))
        assert e.value.status == 400

    def test_bad_answer_correct_type(self, svc):
        qid = svc.sample_ids[0]
        with pytest.raises(ApiError) as e:
            svc.submit_label(label_payload(qid, correct=1))
        assert e.value.status == 400

    def test_unknown_query(self, svc):
        with pytest.raises(ApiError) as e:
            svc.submit_label(label_payload("zzzz"))
        assert e.value.status == 404

    def test_query_outside_sample(self, svc):
        outside = next(
            q.query_id
            for q in svc.queries
            if q.state != "Pruned" and q.query_id not in svc.sample_set
        )
        with pytest.raises(ApiError) as e:
            svc.submit_label(label_payload(outside))
        assert e.value.status == 404

    def test_ack_carries_metrics(self, svc):
        qid = svc.sample_ids[0]
        ack = svc.submit_label(label_payload(qid, correct=True))
        assert ack["ok"] is True
        assert ack["version"] == 1
        assert ack["precision"]["attempted"] == 1
        assert ack["precision"]["correct"] == 1
        assert ack["coverage"]["total"] > 0
        assert ack["utility_breakdown"]["UsefulInteresting"] == 1.0
        assert "rule_disagreements" in ack
        assert "gaps_count" in ack

    def test_precision_null_until_judged(self, svc):
        qid = svc.sample_ids[0]
        ack = svc.submit_label(label_payload(qid, correct=None))
        assert ack["precision"] is None

    def test_resubmission_replaces_live_label(self, svc):
        qid = svc.sample_ids[0]
        svc.submit_label(label_payload(qid, category="UsefulInteresting"))
        ack = svc.submit_label(label_payload(qid, category="Nonsensical"))
        assert ack["utility_breakdown"] == {
            "UsefulInteresting": 0.0,
            "UsefulNotInteresting": 0.0,
            "Nonsensical": 1.0,
        }
        # the log keeps both entries; only one label is live
        assert len(svc.labels) == 2
        assert [l.ts for l in svc.labels] == [0, 1]

    def test_labels_survive_restart(self, svc):
        qid = svc.sample_ids[0]
        svc.submit_label(label_payload(qid, correct=False))
        reborn = ReviewService(svc.ws, CFG)
        assert len(reborn.labels) == 1
        assert reborn.metrics()["precision"]["correct"] == 0

    def test_metrics_endpoint_matches_ack(self, svc):
        qid = svc.sample_ids[0]
        ack = svc.submit_label(label_payload(qid, correct=True))
        metrics = svc.metrics()
        for key in ("coverage", "precision", "utility_breakdown", "rule_disagreements"):
            assert metrics[key] == ack[key]


class TestQueriesPage:
    def test_page_shape_and_size(self, svc):
        page = svc.queries_page(None, None, 1)
        assert page["page"] == 1
        assert page["total"] == len(svc.queries)
        assert len(page["queries"]) <= PAGE_SIZE
        assert page["version"] == 1

    def test_filters(self, svc):
        pruned = svc.queries_page("Pruned", None, 1)
        assert all(r["state"] == "Pruned" for r in pruned["queries"])
        analogies = svc.queries_page(None, "Analogy", 1)
        assert all(r["kind"] == "Analogy" for r in analogies["queries"])

    def test_page_out_of_range(self, svc):
        with pytest.raises(ApiError) as e:
            svc.queries_page(None, None, 99999)
        assert e.value.status == 404

    def test_page_below_one(self, svc):
        with pytest.raises(ApiError) as e:
            svc.queries_page(None, None, 0)
        assert e.value.status == 400

    def test_last_page_holds_remainder(self, svc):
        first = svc.queries_page(None, None, 1)
        last = svc.queries_page(None, None, first["pages"])
        expect = first["total"] - (first["pages"] - 1) * PAGE_SIZE
        assert len(last["queries"]) == expect


@pytest.fixture
def server(ws, tmp_path):
    import shutil

    clone = tmp_path / "ws"
    shutil.copytree(ws.root, clone)
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<h1>review</h1>", encoding="utf-8")
    (ui / "app.js").write_text("export {};", encoding="utf-8")
    (tmp_path / "secret.txt").write_text("keep out", encoding="utf-8")
    srv = make_server(Workspace(clone), CFG, port=0, ui_dir=ui)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{srv.server_address[1]}"
    finally:
        srv.shutdown()
        srv.server_close()


class TestHttp:
    def test_review_flow_over_http(self, server):
        with httpx.Client(base_url=server) as client:
            r = client.get("/api/review/next", params={"reviewer": "r1"})
            assert r.status_code == 200
            item = r.json()
            ack = client.post("/api/review/label", json=label_payload(item["query_id"]))
            assert ack.status_code == 200
            assert ack.json()["ok"] is True
            r2 = client.get("/api/review/next", params={"reviewer": "r1"})
            assert r2.json()["query_id"] != item["query_id"]

    def test_missing_reviewer_400(self, server):
        with httpx.Client(base_url=server) as client:
            assert client.get("/api/review/next").status_code == 400

    def test_exhausted_queue_204(self, server):
        with httpx.Client(base_url=server) as client:
            while True:
                r = client.get("/api/review/next", params={"reviewer": "r1"})
                if r.status_code == 204:
                    break
                assert r.status_code == 200
                client.post("/api/review/label", json=label_payload(r.json()["query_id"]))

    def test_malformed_json_400(self, server):
        with httpx.Client(base_url=server) as client:
            r = client.post(
                "/api/review/label",
                content=b"{nope",
                headers={"Content-Type": "application/json"},
            )
            assert r.status_code == 400

    def test_metrics_endpoint(self, server):
        with httpx.Client(base_url=server) as client:
            r = client.get("/api/metrics")
            assert r.status_code == 200
            body = r.json()
            assert body["version"] == 1
            assert body["precision"] is None

    def test_queries_endpoint_paging(self, server):
        with httpx.Client(base_url=server) as client:
            r = client.get("/api/queries", params={"page": 1})
            assert r.status_code == 200
            assert r.json()["page"] == 1
            beyond = r.json()["pages"] + 1
            assert client.get("/api/queries", params={"page": beyond}).status_code == 404
            assert client.get("/api/queries", params={"page": "x"}).status_code == 400

    def test_unknown_post_endpoint_404(self, server):
        with httpx.Client(base_url=server) as client:
            assert client.post("/api/nope", json={}).status_code == 404

    def test_static_index_and_assets(self, server):
        with httpx.Client(base_url=server) as client:
            root = client.get("/")
            assert root.status_code == 200
            assert "review" in root.text
            js = client.get("/app.js")
            assert js.status_code == 200
            assert "javascript" in js.headers["content-type"]

    def test_static_missing_file_404(self, server):
        with httpx.Client(base_url=server) as client:
            assert client.get("/nope.css").status_code == 404

    def test_path_traversal_blocked(self, server):
        # raw connection: the client must not normalize the path
        host, port = server.split("//")[1].split(":")
        conn = http.client.HTTPConnection(host, int(port))
        try:
            conn.request("GET", "/../secret.txt")
            resp = conn.getresponse()
            assert resp.status == 404
            assert b"keep out" not in resp.read()
        finally:
            conn.close()

"""HTTP contract: endpoints, error codes, and session flow."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from expertfind.corpus import Article
from expertfind.engine import ExpertFinder
from expertfind.feedback import FeedbackLog
from expertfind.service import create_app
from expertfind.textmodel import Tokenizer

QUERY = {"title": "expert retrieval", "abstract": "evidence transport"}


@pytest.fixture
def sample_client(sample_articles, sample_names, tmp_path):
    finder = ExpertFinder.build(sample_articles, names=sample_names)
    log = FeedbackLog(tmp_path / "feedback.jsonl")
    app = create_app(finder, feedback_log=log)
    with TestClient(app) as client:
        client.log_path = log.path
        yield client


def _open_session(client, body=QUERY):
    response = client.post("/api/query", json=body)
    assert response.status_code == 200, response.text
    return response.json()


class TestHealth:
    def test_reports_index_dimensions(self, sample_client):
        body = sample_client.get("/healthz").json()
        assert body["index_docs"] == 3
        assert body["index_authors"] == 6
        assert body["regime"] == "tfidf-cosine"

    def test_before_load_is_503(self):
        with TestClient(create_app(None)) as client:
            response = client.get("/healthz")
            assert response.status_code == 503
            assert response.json()["code"] == "index_not_loaded"
            assert client.post("/api/query", json=QUERY).status_code == 503

    def test_read_only_and_repeatable(self, sample_client):
        assert sample_client.get("/healthz").json() == sample_client.get("/healthz").json()


class TestQueryEndpoint:
    def test_opens_session_with_head_candidate(self, sample_client):
        body = _open_session(sample_client)
        assert body["total_candidates"] == 6  # min(9, |authors|)
        candidate = body["candidate"]
        assert candidate["author_id"] == "6"
        assert candidate["position"] == 1
        article = candidate["articles"][0]
        for field in ("title", "abstract", "authors", "affiliations", "date"):
            assert field in article
        assert "rank" in article and "similarity" in article

    def test_identical_queries_rank_identically(self, sample_client):
        first = _open_session(sample_client)
        second = _open_session(sample_client)
        assert first["candidate"] == second["candidate"]
        assert first["session_id"] != second["session_id"]

    def test_empty_query_is_400(self, sample_client):
        response = sample_client.post("/api/query", json={"title": "", "abstract": ""})
        assert response.status_code == 400
        assert response.json()["code"] == "empty_query"

    def test_all_stopword_query_is_400(self, sample_client):
        response = sample_client.post("/api/query", json={"title": "the of", "abstract": "a an"})
        assert response.status_code == 400
        assert response.json()["code"] == "empty_query"

    def test_unknown_regime_is_bad_config(self, sample_client):
        response = sample_client.post("/api/query", json=dict(QUERY, regime="lda"))
        assert response.status_code == 400
        assert response.json()["code"] == "bad_config"

    def test_unserved_regime_is_bad_config(self, sample_client):
        response = sample_client.post("/api/query", json=dict(QUERY, regime="wmd"))
        assert response.status_code == 400
        assert response.json()["code"] == "bad_config"

    def test_unknown_fusion_is_bad_config(self, sample_client):
        response = sample_client.post("/api/query", json=dict(QUERY, fusion="combsum"))
        assert response.status_code == 400
        assert response.json()["code"] == "bad_config"

    def test_non_object_body_is_bad_request(self, sample_client):
        response = sample_client.post("/api/query", json=["not", "an", "object"])
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"


class TestCandidateEndpoint:
    def test_fresh_session_returns_first_profile(self, sample_client):
        session_id = _open_session(sample_client)["session_id"]
        response = sample_client.get(f"/api/session/{session_id}/candidate")
        assert response.status_code == 200
        assert response.json()["author_id"] == "6"

    def test_get_is_idempotent(self, sample_client):
        session_id = _open_session(sample_client)["session_id"]
        url = f"/api/session/{session_id}/candidate"
        assert sample_client.get(url).json() == sample_client.get(url).json()

    def test_unknown_session_is_404(self, sample_client):
        response = sample_client.get("/api/session/nope/candidate")
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_session"

    def test_idle_session_expires(self, sample_articles, sample_names):
        import time

        finder = ExpertFinder.build(sample_articles, names=sample_names)
        with TestClient(create_app(finder, session_ttl_seconds=0.05)) as client:
            session_id = _open_session(client)["session_id"]
            time.sleep(0.1)
            response = client.get(f"/api/session/{session_id}/candidate")
            assert response.status_code == 404
            assert response.json()["code"] == "unknown_session"

    def test_completed_session_is_410(self, sample_client):
        body = _open_session(sample_client)
        session_id = body["session_id"]
        current = body["candidate"]
        while current is not None:
            response = sample_client.post(
                f"/api/session/{session_id}/verdict",
                json={"author_id": current["author_id"], "decision": "reject"},
            )
            current = response.json()["next"]
        response = sample_client.get(f"/api/session/{session_id}/candidate")
        assert response.status_code == 410
        assert response.json()["code"] == "session_complete"


class TestVerdictEndpoint:
    def test_accept_returns_next_candidate(self, sample_client):
        body = _open_session(sample_client)
        response = sample_client.post(
            f"/api/session/{body['session_id']}/verdict",
            json={"author_id": "6", "decision": "accept"},
        )
        assert response.status_code == 200
        assert response.json()["next"]["author_id"] == "3"

    def test_bad_decision_is_422(self, sample_client):
        body = _open_session(sample_client)
        response = sample_client.post(
            f"/api/session/{body['session_id']}/verdict",
            json={"author_id": "6", "decision": "maybe"},
        )
        assert response.status_code == 422
        assert response.json()["code"] == "bad_decision"

    def test_non_current_author_is_409(self, sample_client):
        body = _open_session(sample_client)
        response = sample_client.post(
            f"/api/session/{body['session_id']}/verdict",
            json={"author_id": "4", "decision": "accept"},
        )
        assert response.status_code == 409
        assert response.json()["code"] == "out_of_order_verdict"

    def test_duplicate_verdict_is_409(self, sample_client):
        body = _open_session(sample_client)
        url = f"/api/session/{body['session_id']}/verdict"
        sample_client.post(url, json={"author_id": "6", "decision": "accept"})
        response = sample_client.post(url, json={"author_id": "6", "decision": "reject"})
        assert response.status_code == 409
        assert response.json()["code"] == "duplicate_verdict"

    def test_completion_returns_summary(self, sample_client):
        body = _open_session(sample_client)
        session_id = body["session_id"]
        author_order = []
        current = body["candidate"]
        while current is not None:
            author_order.append(current["author_id"])
            decision = "accept" if len(author_order) == 1 else "reject"
            response = sample_client.post(
                f"/api/session/{session_id}/verdict",
                json={"author_id": current["author_id"], "decision": decision},
            )
            payload = response.json()
            current = payload["next"]
        assert payload["complete"] is True
        assert payload["summary"]["accepted"] == ["6"]
        assert author_order == ["6", "3", "1", "2", "4", "5"]

    def test_verdicts_are_logged(self, sample_client):
        body = _open_session(sample_client)
        sample_client.post(
            f"/api/session/{body['session_id']}/verdict",
            json={"author_id": "6", "decision": "accept"},
        )
        lines = sample_client.log_path.read_text().strip().splitlines()
        assert len(lines) == 1
        assert '"author_id": "6"' in lines[0] or '"author_id":"6"' in lines[0]


class TestRecomputeEndpoint:
    def test_zero_accepts_shortens_original_order(self, sample_client):
        body = _open_session(sample_client)
        session_id = body["session_id"]
        sample_client.post(
            f"/api/session/{session_id}/verdict",
            json={"author_id": "6", "decision": "reject"},
        )
        response = sample_client.post(f"/api/session/{session_id}/recompute")
        assert response.status_code == 200
        payload = response.json()
        assert payload["recompute_count"] == 1
        assert payload["total_candidates"] == 5
        assert payload["candidate"]["author_id"] == "3"

    def test_unknown_session_is_404(self, sample_client):
        response = sample_client.post("/api/session/nope/recompute")
        assert response.status_code == 404

    def test_planted_topic_accept_changes_head(self, tmp_path):
        articles = [
            Article("d1", "alpha alpha", "", ("p1",)),
            Article("d2", "alpha beta", "", ("p2",)),
            Article("d3", "gamma gamma", "", ("q1",)),
            Article("d4", "gamma delta", "", ("q2",)),
        ]
        finder = ExpertFinder.build(articles, tokenizer=Tokenizer(stopwords=frozenset()))
        with TestClient(create_app(finder)) as client:
            body = _open_session(client, {"title": "alpha gamma", "abstract": ""})
            session_id = body["session_id"]
            assert body["candidate"]["author_id"] == "p1"
            client.post(
                f"/api/session/{session_id}/verdict",
                json={"author_id": "p1", "decision": "reject"},
            )
            client.post(
                f"/api/session/{session_id}/verdict",
                json={"author_id": "q1", "decision": "accept"},
            )
            payload = client.post(f"/api/session/{session_id}/recompute").json()
            assert payload["candidate"]["author_id"] == "q2"
            assert payload["total_candidates"] == 2

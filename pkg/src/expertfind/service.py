"""HTTP facade over a loaded engine: query, review, verdict, recompute.

All error responses carry ``{"code": ..., "message": ...}`` with stable
codes:

    bad_request         400  body is not a JSON object of the expected shape
    empty_query         400  no usable query text (blank or all out-of-vocabulary)
    bad_config          400  unknown regime/fusion value, or regime not served
    unknown_session     404  no such (or expired) session
    out_of_order_verdict 409 verdict for an author other than the current candidate
    duplicate_verdict   409  author already judged in this session
    session_complete    410  every candidate has been judged
    bad_decision        422  decision is neither "accept" nor "reject"
    index_not_loaded    503  service started without an index

The index is loaded once and never mutated; sessions are held in memory
behind per-session locks and expire after an idle TTL.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import feedback
from .engine import ExpertFinder, finder_regime_check
from .errors import (
    ConfigError,
    DuplicateVerdictError,
    EmptyQueryError,
    OutOfOrderVerdictError,
    SessionCompleteError,
)
from .expertrank import DEFAULT_TOP_K, FUSION_METHODS, FusionConfig
from .feedback import CandidateProfile, FeedbackLog, ReviewSession

DEFAULT_SESSION_TTL_SECONDS = 24 * 3600


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def candidate_payload(profile: CandidateProfile) -> dict:
    return {
        "author_id": profile.author_id,
        "display_name": profile.display_name,
        "position": profile.position,
        "total_candidates": profile.total_candidates,
        "score": profile.score,
        "articles": [
            {
                "title": e.article.title,
                "abstract": e.article.abstract,
                "authors": list(e.author_names),
                "affiliations": list(e.article.affiliations),
                "date": e.article.published_on,
                "rank": e.rank,
                "similarity": e.similarity,
            }
            for e in profile.articles
        ],
    }


@dataclass
class _Slot:
    session: ReviewSession
    lock: threading.Lock = field(default_factory=threading.Lock)
    expires_at: float = 0.0


class SessionStore:
    """In-memory sessions with idle expiry; the store lock only guards the
    dict, per-session work happens under the slot lock."""

    def __init__(self, ttl_seconds: float):
        self.ttl = ttl_seconds
        self._slots: dict[str, _Slot] = {}
        self._lock = threading.Lock()

    def put(self, session: ReviewSession) -> None:
        slot = _Slot(session=session, expires_at=time.monotonic() + self.ttl)
        with self._lock:
            self._slots[session.session_id] = slot

    def get(self, session_id: str) -> _Slot | None:
        now = time.monotonic()
        with self._lock:
            slot = self._slots.get(session_id)
            if slot is None:
                return None
            if slot.expires_at < now:
                del self._slots[session_id]
                return None
            slot.expires_at = now + self.ttl
            return slot


def create_app(
    finder: ExpertFinder | None,
    *,
    feedback_log: FeedbackLog | None = None,
    top_k: int = DEFAULT_TOP_K,
    default_fusion: str = "rr",
    session_ttl_seconds: float = DEFAULT_SESSION_TTL_SECONDS,
) -> FastAPI:
    app = FastAPI(title="expertfind", docs_url=None, redoc_url=None)
    sessions = SessionStore(session_ttl_seconds)
    app.state.finder = finder
    app.state.sessions = sessions

    @app.exception_handler(RequestValidationError)
    async def _bad_body(request: Request, exc: RequestValidationError):
        return _error(400, "bad_request", "request body must be a JSON object")

    async def _json_object(request: Request) -> dict | None:
        try:
            body = await request.json()
        except Exception:
            return None
        return body if isinstance(body, dict) else None

    @app.get("/healthz")
    async def healthz():
        if finder is None:
            return _error(503, "index_not_loaded", "no index is loaded")
        return {
            "status": "ok",
            "index_docs": finder.index.n_documents,
            "index_authors": finder.index.n_authors,
            "regime": finder.regime,
        }

    @app.post("/api/query")
    async def submit_query(request: Request):
        if finder is None:
            return _error(503, "index_not_loaded", "no index is loaded")
        body = await _json_object(request)
        if body is None:
            return _error(400, "bad_request", "request body must be a JSON object")
        title = body.get("title", "")
        abstract = body.get("abstract", "")
        if not isinstance(title, str) or not isinstance(abstract, str):
            return _error(400, "bad_request", "'title' and 'abstract' must be strings")
        fusion_method = body.get("fusion", default_fusion)
        if fusion_method not in FUSION_METHODS:
            return _error(400, "bad_config", f"unknown fusion {fusion_method!r}")
        try:
            finder_regime_check(finder, body.get("regime"))
        except ConfigError as exc:
            return _error(400, "bad_config", str(exc))
        fusion = FusionConfig(method=fusion_method, top_k=top_k)
        try:
            query, rep, table, ranking = finder.search(title, abstract, fusion)
        except EmptyQueryError as exc:
            return _error(400, "empty_query", str(exc))
        session = feedback.open_session(query, rep, table, ranking, fusion=fusion)
        sessions.put(session)
        profile = feedback.next_candidate(session, finder.index)
        return {
            "session_id": session.session_id,
            "total_candidates": len(session.candidates),
            "candidate": candidate_payload(profile),
        }

    @app.get("/api/session/{session_id}/candidate")
    async def current_candidate(session_id: str):
        slot = sessions.get(session_id)
        if slot is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        with slot.lock:
            profile = feedback.next_candidate(slot.session, finder.index)
            if profile is None:
                return _error(410, "session_complete", "all candidates have been judged")
            return candidate_payload(profile)

    @app.post("/api/session/{session_id}/verdict")
    async def post_verdict(session_id: str, request: Request):
        slot = sessions.get(session_id)
        if slot is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        body = await _json_object(request)
        if body is None:
            return _error(400, "bad_request", "request body must be a JSON object")
        decision = body.get("decision")
        if decision not in feedback.DECISIONS:
            return _error(422, "bad_decision", "decision must be 'accept' or 'reject'")
        author_id = body.get("author_id")
        if not isinstance(author_id, str):
            return _error(400, "bad_request", "'author_id' must be a string")
        with slot.lock:
            session = slot.session
            author = finder.index.author_index.get(author_id)
            if author is None:
                return _error(
                    409, "out_of_order_verdict", f"author {author_id!r} is not the current candidate"
                )
            try:
                feedback.record_verdict(session, finder.index, author, decision, feedback_log)
            except SessionCompleteError as exc:
                return _error(410, "session_complete", str(exc))
            except DuplicateVerdictError as exc:
                return _error(409, "duplicate_verdict", str(exc))
            except OutOfOrderVerdictError as exc:
                return _error(409, "out_of_order_verdict", str(exc))
            profile = feedback.next_candidate(session, finder.index)
            if profile is None:
                return {"next": None, "complete": True, "summary": _summary(session)}
            return {"next": candidate_payload(profile), "complete": False}

    @app.post("/api/session/{session_id}/recompute")
    async def post_recompute(session_id: str):
        slot = sessions.get(session_id)
        if slot is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        with slot.lock:
            session = feedback.recompute(slot.session, finder)
            profile = feedback.next_candidate(session, finder.index)
            return {
                "session_id": session.session_id,
                "total_candidates": len(session.candidates),
                "recompute_count": session.recompute_count,
                "candidate": candidate_payload(profile) if profile else None,
                "complete": profile is None,
                "summary": _summary(session) if profile is None else None,
            }

    def _summary(session: ReviewSession) -> dict:
        accepted = [
            finder.index.authors[a].author_id
            for a, d in session.verdicts.items()
            if d == feedback.DECISION_ACCEPT
        ]
        rejected = [
            finder.index.authors[a].author_id
            for a, d in session.verdicts.items()
            if d == feedback.DECISION_REJECT
        ]
        return {
            "accepted": accepted,
            "rejected": rejected,
            "recompute_count": session.recompute_count,
        }

    return app

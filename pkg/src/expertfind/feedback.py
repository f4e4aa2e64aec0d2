"""Interactive review sessions: sequential candidates, verdicts, recompute.

A session presents the top-k authors one at a time. Each presented author
must be accepted or rejected before the next one is shown. "Recompute"
averages the query representation with the representations of every
document written by the accepted authors, re-scores and re-ranks, and
continues with the not-yet-judged authors.

Verdicts are appended to a JSON-lines feedback log; replaying the log
reconstructs every session's verdict sequence exactly.
"""

from __future__ import annotations

import datetime
import hashlib
import json
import secrets
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Article, BipartiteIndex
from .engine import ExpertFinder
from .errors import (
    DuplicateVerdictError,
    NoCandidatesError,
    OutOfOrderVerdictError,
    SessionCompleteError,
)
from .expertrank import ExpertRanking, ExpertScore, FusionConfig, rank_documents
from .similarity import SimilarityTable
from .textmodel import QueryText

DECISION_ACCEPT = "accept"
DECISION_REJECT = "reject"
DECISIONS = (DECISION_ACCEPT, DECISION_REJECT)


def query_fingerprint(query: QueryText) -> str:
    return hashlib.sha256(query.raw.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class VerdictRecord:
    """One line of the feedback log."""

    ts: str
    session_id: str
    query_hash: str
    author_id: str
    decision: str
    recompute_epoch: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "ts": self.ts,
                "session_id": self.session_id,
                "query_hash": self.query_hash,
                "author_id": self.author_id,
                "decision": self.decision,
                "recompute_epoch": self.recompute_epoch,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "VerdictRecord":
        record = json.loads(line)
        return cls(
            ts=record["ts"],
            session_id=record["session_id"],
            query_hash=record["query_hash"],
            author_id=record["author_id"],
            decision=record["decision"],
            recompute_epoch=record["recompute_epoch"],
        )


class FeedbackLog:
    """Append-only JSON-lines verdict log; one write per record keeps
    appends atomic per record."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def append(self, record: VerdictRecord) -> None:
        with self.path.open("a", encoding="utf-8") as handle:
            handle.write(record.to_json() + "\n")

    def replay(self) -> dict[str, list[VerdictRecord]]:
        """Verdict sequences per session, in append order."""
        sessions: dict[str, list[VerdictRecord]] = {}
        if not self.path.exists():
            return sessions
        with self.path.open("r", encoding="utf-8") as handle:
            for line in handle:
                if not line.strip():
                    continue
                record = VerdictRecord.from_json(line)
                sessions.setdefault(record.session_id, []).append(record)
        return sessions


@dataclass(frozen=True)
class ArticleEvidence:
    """One contributing article with its rank context, for display."""

    article: Article
    author_names: tuple[str, ...]
    rank: int
    similarity: float
    contribution: float


@dataclass(frozen=True)
class CandidateProfile:
    """Everything the reviewer sees for one candidate author."""

    author: int
    author_id: str
    display_name: str
    position: int
    total_candidates: int
    score: float
    articles: tuple[ArticleEvidence, ...]


@dataclass
class ReviewSession:
    """Mutable interactive state; operations on one session must be
    externally serialized (single writer)."""

    session_id: str
    query: QueryText
    representation: object
    fusion: FusionConfig
    table: SimilarityTable
    ranking: ExpertRanking
    candidates: tuple[ExpertScore, ...]
    cursor: int = 0
    verdicts: dict = field(default_factory=dict)
    recompute_count: int = 0

    @property
    def complete(self) -> bool:
        return self.cursor >= len(self.candidates)

    @property
    def accepted_authors(self) -> list[int]:
        return [a for a, d in self.verdicts.items() if d == DECISION_ACCEPT]

    @property
    def judged_authors(self) -> set[int]:
        return set(self.verdicts)


def open_session(
    query: QueryText,
    representation,
    table: SimilarityTable,
    ranking: ExpertRanking,
    *,
    fusion: FusionConfig = FusionConfig(),
    session_id: str | None = None,
) -> ReviewSession:
    """Start a session at the head of the ranking's top-k list."""
    candidates = ranking.top(fusion.top_k)
    if not candidates:
        raise NoCandidatesError("cannot open a session over an empty ranking")
    return ReviewSession(
        session_id=session_id or secrets.token_urlsafe(12),
        query=query,
        representation=representation,
        fusion=fusion,
        table=table,
        ranking=ranking,
        candidates=candidates,
    )


def next_candidate(session: ReviewSession, index: BipartiteIndex) -> CandidateProfile | None:
    """The candidate at the cursor with full article evidence, or None when
    every candidate has been judged. Does not advance the cursor."""
    if session.complete:
        return None
    entry = session.candidates[session.cursor]
    rank_of = rank_documents(session.table).rank_of
    evidence = []
    for doc, contribution in entry.contributions:
        article = index.documents[doc]
        evidence.append(
            ArticleEvidence(
                article=article,
                author_names=tuple(
                    index.authors[index.author_index[a]].display_name for a in article.author_ids
                ),
                rank=int(rank_of[doc]),
                similarity=float(session.table.similarities[doc]),
                contribution=contribution,
            )
        )
    evidence.sort(key=lambda e: e.rank)
    record = index.authors[entry.author]
    return CandidateProfile(
        author=entry.author,
        author_id=record.author_id,
        display_name=record.display_name,
        position=session.cursor + 1,
        total_candidates=len(session.candidates),
        score=entry.score,
        articles=tuple(evidence),
    )


def record_verdict(
    session: ReviewSession,
    index: BipartiteIndex,
    author: int,
    decision: str,
    log: FeedbackLog | None = None,
) -> ReviewSession:
    """Store a verdict for the current candidate and advance the cursor."""
    if decision not in DECISIONS:
        raise ValueError(f"decision must be one of {DECISIONS}, got {decision!r}")
    if session.complete:
        raise SessionCompleteError("all candidates of this session have been judged")
    if author in session.verdicts:
        raise DuplicateVerdictError(f"author {author} already has a verdict in this session")
    current = session.candidates[session.cursor].author
    if author != current:
        raise OutOfOrderVerdictError(
            f"verdict for author {author} but the current candidate is {current}"
        )
    session.verdicts[author] = decision
    session.cursor += 1
    if log is not None:
        log.append(
            VerdictRecord(
                ts=datetime.datetime.now(datetime.timezone.utc).isoformat(),
                session_id=session.session_id,
                query_hash=query_fingerprint(session.query),
                author_id=index.authors[author].author_id,
                decision=decision,
                recompute_epoch=session.recompute_count,
            )
        )
    return session


def recompute(session: ReviewSession, finder: ExpertFinder) -> ReviewSession:
    """Average the query representation with the accepted authors' document
    representations, re-rank, drop judged authors, and restart the cursor.

    With no accepted authors this is the identity update: the ordering is
    preserved, restricted to the authors not yet judged.
    """
    accepted_docs: set[int] = set()
    for author in session.accepted_authors:
        accepted_docs.update(finder.index.author_to_docs[author])
    session.representation = finder.averaged_representation(
        session.representation, sorted(accepted_docs)
    )
    session.table = finder.score(session.representation)
    session.ranking = finder.rank(session.table, session.fusion)
    judged = session.judged_authors
    remaining = tuple(e for e in session.ranking.entries if e.author not in judged)
    session.candidates = remaining[: min(session.fusion.top_k, len(remaining))]
    session.cursor = 0
    session.recompute_count += 1
    return session

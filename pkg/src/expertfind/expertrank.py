"""Aggregate document similarities into a ranking of candidate authors.

Two fusion methods:

* reciprocal-rank voting: sort documents by similarity, then give each
  author the sum of 1/rank over the documents they wrote;
* Bayesian voting: each author scores the sum of their documents'
  similarities weighted by a uniform document-author association
  (1/|docs of author|) and a uniform author prior (1/|authors|).

All tie-breaks are by ascending dense index, so rankings are fully
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import BipartiteIndex
from .errors import ConfigError
from .similarity import SimilarityTable

FUSION_RR = "rr"
FUSION_BAYES = "bayes"
FUSION_METHODS = (FUSION_RR, FUSION_BAYES)

DEFAULT_TOP_K = 9


@dataclass(frozen=True)
class FusionConfig:
    """Fusion method plus presentation size; `rank_cutoff` optionally limits
    votes to documents ranked at or above the cutoff (default: no cutoff,
    ranks are global over the whole corpus)."""

    method: str = FUSION_RR
    top_k: int = DEFAULT_TOP_K
    rank_cutoff: int | None = None

    def __post_init__(self):
        if self.method not in FUSION_METHODS:
            raise ConfigError(f"unknown fusion method {self.method!r}; expected one of {FUSION_METHODS}")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")
        if self.rank_cutoff is not None and self.rank_cutoff < 1:
            raise ConfigError("rank_cutoff must be >= 1")


@dataclass(frozen=True)
class RankedDocuments:
    """Documents sorted by similarity descending, ties by ascending index;
    ranks are 1-based and total."""

    order: np.ndarray
    rank_of: np.ndarray


@dataclass(frozen=True)
class ExpertScore:
    """One author's aggregated score and the per-document contributions
    (doc index, contribution) that sum to it."""

    author: int
    score: float
    contributions: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class ExpertRanking:
    """Every indexed author exactly once, scores non-increasing, score ties
    broken by ascending author index."""

    method: str
    entries: tuple[ExpertScore, ...]

    def top(self, k: int) -> tuple[ExpertScore, ...]:
        if k < 1:
            raise ValueError("k must be >= 1")
        return self.entries[: min(k, len(self.entries))]

    def position_of(self, author: int) -> int:
        """1-based position of an author in the ranking."""
        for position, entry in enumerate(self.entries, start=1):
            if entry.author == author:
                return position
        raise KeyError(f"author {author} not in ranking")


def rank_documents(table: SimilarityTable) -> RankedDocuments:
    """Stable descending sort of all documents by similarity."""
    sims = table.similarities
    order = np.lexsort((np.arange(sims.size), -sims))
    rank_of = np.empty(sims.size, dtype=np.int64)
    rank_of[order] = np.arange(1, sims.size + 1)
    return RankedDocuments(order=order, rank_of=rank_of)


def _sorted_entries(method: str, scored: list[ExpertScore]) -> ExpertRanking:
    entries = sorted(scored, key=lambda e: (-e.score, e.author))
    return ExpertRanking(method=method, entries=tuple(entries))


def reciprocal_rank_fusion(
    ranked: RankedDocuments,
    index: BipartiteIndex,
    rank_cutoff: int | None = None,
) -> ExpertRanking:
    """Author score = sum of 1/rank over the author's documents."""
    if ranked.rank_of.size != index.n_documents:
        raise ValueError("ranking does not cover all indexed documents")
    scored = []
    for author, docs in enumerate(index.author_to_docs):
        contributions = tuple(
            (doc, 1.0 / float(ranked.rank_of[doc]))
            for doc in docs
            if rank_cutoff is None or ranked.rank_of[doc] <= rank_cutoff
        )
        scored.append(
            ExpertScore(
                author=author,
                score=float(sum(value for _, value in contributions)),
                contributions=contributions,
            )
        )
    return _sorted_entries(FUSION_RR, scored)


def bayes_vote(
    table: SimilarityTable,
    index: BipartiteIndex,
    rank_cutoff: int | None = None,
) -> ExpertRanking:
    """Author score = sum over their documents of
    similarity * (1/|docs of author|) * (1/|authors|).

    Negative cosine similarities are clamped to 0 here (probabilities
    cannot be negative); rank-based fusion needs no clamp.
    """
    if len(table) != index.n_documents:
        raise ValueError("similarity table does not cover all indexed documents")
    sims = np.maximum(table.similarities, 0.0)
    prior = 1.0 / index.n_authors
    rank_of = rank_documents(table).rank_of if rank_cutoff is not None else None
    scored = []
    for author, docs in enumerate(index.author_to_docs):
        association = 1.0 / len(docs)
        contributions = tuple(
            (doc, float(sims[doc]) * association * prior)
            for doc in docs
            if rank_of is None or rank_of[doc] <= rank_cutoff
        )
        scored.append(
            ExpertScore(
                author=author,
                score=float(sum(value for _, value in contributions)),
                contributions=contributions,
            )
        )
    return _sorted_entries(FUSION_BAYES, scored)


def fuse(table: SimilarityTable, index: BipartiteIndex, config: FusionConfig) -> ExpertRanking:
    """Run the configured fusion method over a similarity table."""
    if config.method == FUSION_RR:
        return reciprocal_rank_fusion(rank_documents(table), index, config.rank_cutoff)
    return bayes_vote(table, index, config.rank_cutoff)


def top_k(ranking: ExpertRanking, k: int = DEFAULT_TOP_K) -> tuple[ExpertScore, ...]:
    """First min(k, number of authors) entries of the ranking."""
    return ranking.top(k)

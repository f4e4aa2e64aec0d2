"""End-to-end orchestration: corpus + representations -> ranked experts.

An ExpertFinder wraps the immutable pieces (index, tokenizer, document
representations) and exposes pure query operations, so one engine can
serve many concurrent queries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import Article, BipartiteIndex, build_index
from .errors import ConfigError
from .expertrank import ExpertRanking, FusionConfig, fuse
from .similarity import (
    DEFAULT_PRUNE_CANDIDATES,
    NBowRepresentations,
    REGIME_TFIDF,
    REGIME_WMD,
    ScoringConfig,
    SimilarityTable,
    TfidfRepresentations,
    build_representations,
    score_all_documents,
)
from .textmodel import (
    EmbeddingStore,
    NBowDoc,
    QueryText,
    SparseVector,
    Tokenizer,
    build_query,
    nbow_mean,
    to_nbow,
    vectorize_tfidf,
)


@dataclass(frozen=True)
class ExpertFinder:
    """Immutable query engine over one corpus under one regime."""

    index: BipartiteIndex
    tokenizer: Tokenizer
    representations: TfidfRepresentations | NBowRepresentations
    prune_candidates: int | None = DEFAULT_PRUNE_CANDIDATES

    @property
    def regime(self) -> str:
        return self.representations.regime

    @classmethod
    def build(
        cls,
        articles: Sequence[Article],
        *,
        regime: str = REGIME_TFIDF,
        names: dict | None = None,
        tokenizer: Tokenizer = Tokenizer(),
        store: EmbeddingStore | None = None,
        prune_candidates: int | None = DEFAULT_PRUNE_CANDIDATES,
    ) -> "ExpertFinder":
        index = build_index(list(articles), names)
        representations = build_representations(index, regime, tokenizer, store)
        return cls(
            index=index,
            tokenizer=tokenizer,
            representations=representations,
            prune_candidates=prune_candidates,
        )

    # -- query-side operations ------------------------------------------

    def query(self, title: str, abstract: str) -> QueryText:
        return build_query(title, abstract, self.tokenizer)

    def representation_of(self, query: QueryText):
        """Regime-specific query representation; raises EmptyQueryError
        subclasses when nothing of the query survives the model."""
        if self.regime == REGIME_TFIDF:
            return vectorize_tfidf(self.representations.model, list(query.tokens))
        return to_nbow(list(query.tokens), self.representations.store)

    def score(self, query_rep, prune_candidates: int | None = -1) -> SimilarityTable:
        prune = self.prune_candidates if prune_candidates == -1 else prune_candidates
        config = ScoringConfig(regime=self.regime, prune_candidates=prune)
        return score_all_documents(query_rep, self.representations, config)

    def rank(self, table: SimilarityTable, fusion: FusionConfig) -> ExpertRanking:
        return fuse(table, self.index, fusion)

    def search(self, title: str, abstract: str, fusion: FusionConfig = FusionConfig()):
        """Convenience: (query, representation, table, ranking) in one call."""
        query = self.query(title, abstract)
        rep = self.representation_of(query)
        table = self.score(rep)
        return query, rep, table, self.rank(table, fusion)

    # -- relevance feedback ----------------------------------------------

    def averaged_representation(self, query_rep, doc_indices: Sequence[int]):
        """Mean of the query representation and the given documents'
        representations, renormalized for the regime. With no documents the
        representation is returned unchanged (identity update)."""
        docs = sorted(set(doc_indices))
        if not docs:
            return query_rep
        if self.regime == REGIME_TFIDF:
            if not isinstance(query_rep, SparseVector):
                raise ConfigError("expected a SparseVector query representation")
            parts = [query_rep] + [self.representations.vectors[d] for d in docs]
            return SparseVector.mean(parts).normalized()
        if not isinstance(query_rep, NBowDoc):
            raise ConfigError("expected an NBowDoc query representation")
        parts = [query_rep] + [self.representations.nbows[d] for d in docs]
        return nbow_mean(parts)


def finder_regime_check(finder: ExpertFinder, regime: str | None) -> None:
    """Reject a per-query regime override that the engine cannot serve."""
    if regime is None:
        return
    if regime not in (REGIME_TFIDF, REGIME_WMD):
        raise ConfigError(f"unknown regime {regime!r}")
    if regime != finder.regime:
        raise ConfigError(
            f"this index was built for regime {finder.regime!r}; rebuild to use {regime!r}"
        )

"""Shared fixtures: the three-article bipartite fixture used throughout
(author sets {3,4,5}, {1,2,3,6}, {6}) and a tiny hand-built embedding store."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from expertfind.corpus import Article, build_index
from expertfind.similarity import REGIME_TFIDF, SimilarityTable
from expertfind.textmodel import EmbeddingStore


@pytest.fixture
def sample_articles() -> list[Article]:
    return [
        Article(
            doc_id="doc1",
            title="Spectral clustering of citation networks",
            abstract="We cluster citation graphs with spectral methods.",
            author_ids=("3", "4", "5"),
            affiliations=("Univ A",),
            published_on="2015-03-01",
        ),
        Article(
            doc_id="doc2",
            title="Expert retrieval with voting models",
            abstract="Voting models aggregate document evidence for expert retrieval.",
            author_ids=("1", "2", "3", "6"),
            affiliations=("Univ B", "Lab C"),
            published_on="2016-07-15",
        ),
        Article(
            doc_id="doc3",
            title="Transport distances for text",
            abstract="Optimal transport compares word distributions.",
            author_ids=("6",),
        ),
    ]


@pytest.fixture
def sample_names() -> dict:
    return {str(i): f"Author {i}" for i in range(1, 7)}


@pytest.fixture
def sample_index(sample_articles, sample_names):
    return build_index(sample_articles, sample_names)


@pytest.fixture
def sample_table() -> SimilarityTable:
    # Fixture similarities for (doc1, doc2, doc3): ranks doc2=1, doc3=2, doc1=3.
    return SimilarityTable(regime=REGIME_TFIDF, similarities=np.array([0.2, 0.9, 0.5]))


@pytest.fixture
def toy_store() -> EmbeddingStore:
    vectors = {
        "alpha": np.array([1.0, 0.0, 0.0]),
        "beta": np.array([0.0, 1.0, 0.0]),
        "gamma": np.array([0.0, 0.0, 1.0]),
        "delta": np.array([1.0, 1.0, 0.0]),
        "epsilon": np.array([0.5, 0.5, 1.0]),
    }
    return EmbeddingStore(dimension=3, vectors=vectors)

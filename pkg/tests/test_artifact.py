"""Artifact persistence: byte-determinism and exact round-trips."""

from __future__ import annotations

import numpy as np
import pytest

from expertfind.artifact import load_artifact, save_artifact
from expertfind.engine import ExpertFinder
from expertfind.errors import DataError
from expertfind.expertrank import FusionConfig
from expertfind.textmodel import EmbeddingStore, write_embeddings


def _ranking_ids(finder, title, abstract, method="rr"):
    _, _, table, ranking = finder.search(title, abstract, FusionConfig(method=method))
    return [
        (finder.index.authors[e.author].author_id, e.score) for e in ranking.entries
    ]


def _sample_store(sample_articles, rng):
    tokens = set()
    for article in sample_articles:
        tokens.update(article.text.lower().split())
    tokens = {t.strip(".,") for t in tokens}
    return EmbeddingStore(
        dimension=8, vectors={t: rng.normal(size=8) for t in sorted(tokens)}
    )


class TestTfidfArtifact:
    def test_rebuild_is_byte_identical(self, sample_articles, sample_names, tmp_path):
        for name in ("one.json", "two.json"):
            finder = ExpertFinder.build(sample_articles, names=sample_names)
            save_artifact(finder, tmp_path / name)
        assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()

    def test_round_trip_preserves_rankings(self, sample_articles, sample_names, tmp_path):
        finder = ExpertFinder.build(sample_articles, names=sample_names)
        save_artifact(finder, tmp_path / "artifact.json")
        loaded = load_artifact(tmp_path / "artifact.json")
        for method in ("rr", "bayes"):
            assert _ranking_ids(loaded, "expert retrieval", "evidence transport", method) == (
                _ranking_ids(finder, "expert retrieval", "evidence transport", method)
            )

    def test_round_trip_preserves_vectors_exactly(self, sample_articles, sample_names, tmp_path):
        finder = ExpertFinder.build(sample_articles, names=sample_names)
        save_artifact(finder, tmp_path / "artifact.json")
        loaded = load_artifact(tmp_path / "artifact.json")
        for original, restored in zip(
            finder.representations.vectors, loaded.representations.vectors
        ):
            assert original.dims.tolist() == restored.dims.tolist()
            assert original.weights.tolist() == restored.weights.tolist()
            assert original.norm == restored.norm

    def test_unsupported_version_rejected(self, sample_articles, tmp_path):
        finder = ExpertFinder.build(sample_articles)
        path = tmp_path / "artifact.json"
        save_artifact(finder, path)
        path.write_text(path.read_text().replace('"format_version":1', '"format_version":99'))
        with pytest.raises(DataError, match="version"):
            load_artifact(path)


class TestNBowArtifact:
    def test_round_trip_preserves_rankings(self, sample_articles, sample_names, tmp_path):
        rng = np.random.default_rng(42)
        store = _sample_store(sample_articles, rng)
        embeddings_path = tmp_path / "vectors.txt"
        write_embeddings(store, embeddings_path)
        finder = ExpertFinder.build(
            sample_articles, names=sample_names, regime="wmd", store=store
        )
        save_artifact(finder, tmp_path / "artifact.json", embeddings_path=str(embeddings_path))
        loaded = load_artifact(tmp_path / "artifact.json")
        assert loaded.regime == "wmd"
        assert _ranking_ids(loaded, "expert retrieval", "voting evidence") == (
            _ranking_ids(finder, "expert retrieval", "voting evidence")
        )

    def test_rebuild_is_byte_identical(self, sample_articles, sample_names, tmp_path):
        rng = np.random.default_rng(42)
        store = _sample_store(sample_articles, rng)
        embeddings_path = tmp_path / "vectors.txt"
        write_embeddings(store, embeddings_path)
        for name in ("one.json", "two.json"):
            finder = ExpertFinder.build(
                sample_articles, names=sample_names, regime="wmd", store=store
            )
            save_artifact(finder, tmp_path / name, embeddings_path=str(embeddings_path))
        assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()

    def test_store_missing_artifact_tokens_rejected(self, sample_articles, tmp_path):
        rng = np.random.default_rng(42)
        store = _sample_store(sample_articles, rng)
        embeddings_path = tmp_path / "vectors.txt"
        write_embeddings(store, embeddings_path)
        finder = ExpertFinder.build(sample_articles, regime="wmd", store=store)
        save_artifact(finder, tmp_path / "artifact.json", embeddings_path=str(embeddings_path))
        truncated = EmbeddingStore(dimension=8, vectors={"expert": np.zeros(8)})
        with pytest.raises(DataError, match="lacks tokens"):
            load_artifact(tmp_path / "artifact.json", store=truncated)

"""Cosine, exact transport distance, lower bounds, and corpus scoring."""

from __future__ import annotations

import math

import numpy as np
import pytest

from expertfind.errors import ConfigError, EmptyRepresentationError, NumericError
from expertfind.similarity import (
    REGIME_WMD,
    NBowRepresentations,
    ScoringConfig,
    cosine,
    distance_to_similarity,
    representations_from_nbows,
    rwmd_lower_bound,
    score_all_documents,
    wcd_lower_bound,
    wmd_exact,
)
from expertfind.textmodel import EmbeddingStore, NBowDoc, SparseVector, to_nbow

from oracles import lp_transport_oracle, random_nbow, random_store


def _unit(pairs):
    return SparseVector.from_pairs(pairs).normalized()


class TestCosine:
    def test_self_similarity_is_one(self):
        v = _unit({0: 0.3, 5: 1.7, 9: 0.4})
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_support_is_zero(self):
        assert cosine(_unit({0: 1.0}), _unit({1: 1.0})) == 0.0

    def test_half_overlap(self):
        u = _unit({0: 1.0, 2: 1.0})
        v = _unit({1: 1.0, 2: 1.0})
        assert cosine(u, v) == pytest.approx(0.5, abs=1e-12)

    def test_empty_vector_scores_zero(self):
        assert cosine(SparseVector.empty(), _unit({0: 1.0})) == 0.0
        assert cosine(SparseVector.empty(), SparseVector.empty()) == 0.0


class TestWmdExact:
    def test_identity_distance_zero(self, toy_store):
        doc = to_nbow(["alpha", "beta", "beta"], toy_store)
        distance, plan = wmd_exact(doc, doc)
        assert distance <= 1e-9
        plan.check_feasible(doc.masses, doc.masses)

    def test_singleton_docs_equal_vector_distance(self, toy_store):
        a = to_nbow(["alpha"], toy_store)
        b = to_nbow(["delta"], toy_store)
        distance, _ = wmd_exact(a, b)
        expected = float(np.linalg.norm(toy_store.get("alpha") - toy_store.get("delta")))
        assert distance == pytest.approx(expected, abs=1e-12)

    def test_matches_lp_oracle_on_random_instances(self):
        rng = np.random.default_rng(42)
        store = random_store(rng, 24, 6)
        for _ in range(60):
            a = random_nbow(rng, store, 5)
            b = random_nbow(rng, store, 5)
            distance, plan = wmd_exact(a, b)
            reference = lp_transport_oracle(a.masses, b.masses, np.linalg.norm(
                a.vectors[:, None, :] - b.vectors[None, :, :], axis=2))
            assert distance == pytest.approx(reference, abs=1e-6)
            plan.check_feasible(a.masses, b.masses)

    def test_empty_distribution_rejected(self, toy_store):
        empty = NBowDoc.empty(3)
        full = to_nbow(["alpha"], toy_store)
        with pytest.raises(EmptyRepresentationError):
            wmd_exact(empty, full)

    def test_non_finite_vectors_raise(self):
        store = EmbeddingStore(dimension=2, vectors={"ok": np.array([0.0, 1.0]),
                                                     "bad": np.array([np.nan, 1.0])})
        a = to_nbow(["ok"], store)
        b = to_nbow(["bad"], store)
        with pytest.raises(NumericError):
            wmd_exact(a, b)


class TestLowerBounds:
    def test_identity_bounds_are_zero(self, toy_store):
        doc = to_nbow(["alpha", "gamma"], toy_store)
        assert wcd_lower_bound(doc, doc) == pytest.approx(0.0, abs=1e-12)
        assert rwmd_lower_bound(doc, doc) == pytest.approx(0.0, abs=1e-12)

    def test_singleton_bounds_equal_exact(self, toy_store):
        a = to_nbow(["alpha"], toy_store)
        b = to_nbow(["epsilon"], toy_store)
        exact, _ = wmd_exact(a, b)
        assert wcd_lower_bound(a, b) == pytest.approx(exact, abs=1e-12)
        assert rwmd_lower_bound(a, b) == pytest.approx(exact, abs=1e-12)

    def test_bound_chain_on_random_instances(self):
        rng = np.random.default_rng(7)
        store = random_store(rng, 30, 5)
        for _ in range(150):
            a = random_nbow(rng, store, 6)
            b = random_nbow(rng, store, 6)
            exact, _ = wmd_exact(a, b)
            assert wcd_lower_bound(a, b) <= exact + 1e-9
            assert rwmd_lower_bound(a, b) <= exact + 1e-9


class TestSimilarityTransform:
    def test_strictly_decreasing(self):
        distances = np.array([0.0, 0.25, 0.5, 1.0, 10.0])
        sims = distance_to_similarity(distances)
        assert np.all(np.diff(sims) < 0)
        assert sims[0] == 1.0

    def test_infinite_distance_maps_to_zero(self):
        assert distance_to_similarity(np.inf) == 0.0


def _random_corpus_reps(rng, store, n_docs, max_tokens=6):
    return representations_from_nbows(store, [random_nbow(rng, store, max_tokens) for _ in range(n_docs)])


class TestScoreAllDocuments:
    def test_single_document_corpus(self, toy_store):
        reps = representations_from_nbows(toy_store, [to_nbow(["alpha"], toy_store)])
        table = score_all_documents(to_nbow(["beta"], toy_store), reps)
        assert len(table) == 1
        assert table.regime == REGIME_WMD

    def test_identical_document_attains_similarity_one(self, toy_store):
        docs = [to_nbow(["alpha", "beta"], toy_store), to_nbow(["gamma"], toy_store)]
        reps = representations_from_nbows(toy_store, docs)
        table = score_all_documents(to_nbow(["alpha", "beta"], toy_store), reps)
        assert table.similarities[0] == pytest.approx(1.0, abs=1e-9)
        assert table.similarities[0] > table.similarities[1]

    def test_pruned_cascade_matches_exhaustive_top_m(self):
        rng = np.random.default_rng(11)
        for round_ in range(5):
            store = random_store(rng, 40, 4)
            reps = _random_corpus_reps(rng, store, 20)
            query = random_nbow(rng, store, 5)
            pruned = score_all_documents(query, reps, ScoringConfig(REGIME_WMD, prune_candidates=5))
            exhaustive = score_all_documents(query, reps, ScoringConfig(REGIME_WMD, prune_candidates=None))

            def top5(table):
                order = np.lexsort((np.arange(len(table)), -table.similarities))
                return [(int(d), table.similarities[d]) for d in order[:5]]

            for (doc_a, sim_a), (doc_b, sim_b) in zip(top5(pruned), top5(exhaustive)):
                assert doc_a == doc_b
                assert sim_a == pytest.approx(sim_b, abs=1e-12)
            assert not pruned.approximate[[d for d, _ in top5(pruned)]].any()

    def test_unembeddable_document_scores_zero(self, toy_store):
        docs = [to_nbow(["alpha"], toy_store), NBowDoc.empty(3)]
        reps = representations_from_nbows(toy_store, docs)
        table = score_all_documents(to_nbow(["alpha"], toy_store), reps)
        assert table.similarities[1] == 0.0
        assert np.isinf(table.distances[1])

    def test_empty_query_rejected(self, toy_store):
        reps = representations_from_nbows(toy_store, [to_nbow(["alpha"], toy_store)])
        with pytest.raises(EmptyRepresentationError):
            score_all_documents(NBowDoc.empty(3), reps)

    def test_regime_mismatch_rejected(self, toy_store):
        reps = representations_from_nbows(toy_store, [to_nbow(["alpha"], toy_store)])
        with pytest.raises(ConfigError):
            score_all_documents(to_nbow(["alpha"], toy_store), reps,
                                ScoringConfig(regime="tfidf-cosine"))


class TestMetricProperties:
    def test_symmetry_and_triangle_sampled(self):
        rng = np.random.default_rng(3)
        store = random_store(rng, 20, 4)
        docs = [random_nbow(rng, store, 4) for _ in range(12)]
        distances = {}
        for i, a in enumerate(docs):
            for j, b in enumerate(docs):
                distances[i, j] = wmd_exact(a, b)[0]
        for i in range(len(docs)):
            assert distances[i, i] <= 1e-9
            for j in range(len(docs)):
                assert abs(distances[i, j] - distances[j, i]) <= 1e-9
                for k in range(len(docs)):
                    assert distances[i, k] <= distances[i, j] + distances[j, k] + 1e-7

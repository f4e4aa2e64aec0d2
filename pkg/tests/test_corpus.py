"""Corpus ingestion and bipartite index construction."""

from __future__ import annotations

import json

import numpy as np
import pytest

from expertfind.corpus import (
    Article,
    IngestError,
    build_index,
    docs_of_author,
    load_corpus,
    load_corpus_with_names,
    write_corpus,
)
from expertfind.errors import CorpusFormatError, DuplicateDocIdError


def _write_lines(path, records):
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")


def _sample_records():
    return [
        {
            "doc_id": "doc1",
            "title": "first title",
            "abstract": "first abstract",
            "authors": [{"id": "3", "name": "A3"}, {"id": "4", "name": "A4"}, {"id": "5", "name": "A5"}],
        },
        {
            "doc_id": "doc2",
            "title": "second title",
            "abstract": "second abstract",
            "authors": [
                {"id": "1", "name": "A1"},
                {"id": "2", "name": "A2"},
                {"id": "3", "name": "A3"},
                {"id": "6", "name": "A6"},
            ],
        },
        {
            "doc_id": "doc3",
            "title": "third title",
            "abstract": "third abstract",
            "authors": [{"id": "6", "name": "A6"}],
        },
    ]


class TestLoadCorpus:
    def test_empty_file_gives_empty_list(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text("")
        assert load_corpus(path) == []

    def test_three_line_fixture_loads_author_sets(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        _write_lines(path, _sample_records())
        articles = load_corpus(path)
        assert [a.doc_id for a in articles] == ["doc1", "doc2", "doc3"]
        assert [set(a.author_ids) for a in articles] == [
            {"3", "4", "5"},
            {"1", "2", "3", "6"},
            {"6"},
        ]

    def test_missing_authors_reported_with_line_number(self, tmp_path):
        records = _sample_records()
        del records[0]["authors"]
        path = tmp_path / "corpus.jsonl"
        _write_lines(path, records)
        report: list[IngestError] = []
        articles = load_corpus(path, report=report)
        assert [a.doc_id for a in articles] == ["doc2", "doc3"]
        assert len(report) == 1
        assert report[0].line == 1
        assert "authors" in report[0].message

    def test_strict_mode_aborts_on_bad_line(self, tmp_path):
        records = _sample_records()
        records[1]["authors"] = []
        path = tmp_path / "corpus.jsonl"
        _write_lines(path, records)
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(path, strict=True)

    def test_invalid_json_line_is_reported(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"broken\n' + json.dumps(_sample_records()[2]) + "\n")
        report: list[IngestError] = []
        articles = load_corpus(path, report=report)
        assert [a.doc_id for a in articles] == ["doc3"]
        assert report[0].line == 1

    def test_bad_date_is_rejected(self, tmp_path):
        record = _sample_records()[0]
        record["date"] = "not-a-date"
        path = tmp_path / "corpus.jsonl"
        _write_lines(path, [record])
        report: list[IngestError] = []
        assert load_corpus(path, report=report) == []
        assert "date" in report[0].message

    def test_duplicate_doc_id_is_fatal_even_in_lenient_mode(self, tmp_path):
        records = _sample_records()
        records[2]["doc_id"] = "doc1"
        path = tmp_path / "corpus.jsonl"
        _write_lines(path, records)
        with pytest.raises(DuplicateDocIdError):
            load_corpus(path)

    def test_round_trip(self, tmp_path, sample_articles, sample_names):
        path = tmp_path / "corpus.jsonl"
        write_corpus(sample_articles, path, sample_names)
        loaded, names = load_corpus_with_names(path)
        assert loaded == sample_articles
        assert names == sample_names


class TestBuildIndex:
    def test_sample_adjacency(self, sample_index):
        author6 = sample_index.author_index["6"]
        author3 = sample_index.author_index["3"]
        assert docs_of_author(sample_index, author6) == {1, 2}
        assert docs_of_author(sample_index, author3) == {0, 1}

    def test_sample_author4_single_doc(self, sample_index):
        assert docs_of_author(sample_index, sample_index.author_index["4"]) == {0}

    def test_single_article_single_author(self):
        index = build_index([Article("d", "solo title", "solo text", ("a",))])
        assert index.doc_to_authors == ((0,),)
        assert index.author_to_docs == ((0,),)

    def test_one_document_corpus_covers_every_author(self):
        index = build_index([Article("d", "joint work", "joint text", ("a", "b"))])
        for author in range(index.n_authors):
            assert docs_of_author(index, author) == {0}

    def test_duplicate_doc_id_raises(self, sample_articles):
        with pytest.raises(DuplicateDocIdError):
            build_index(sample_articles + [sample_articles[0]])

    def test_out_of_range_author_raises(self, sample_index):
        with pytest.raises(IndexError):
            docs_of_author(sample_index, sample_index.n_authors)

    def test_random_corpus_transpose_duality(self):
        rng = np.random.default_rng(42)
        articles = []
        for d in range(50):
            authors = rng.choice(20, size=rng.integers(1, 5), replace=False)
            articles.append(
                Article(f"doc{d}", f"title {d}", "text body", tuple(f"a{int(x)}" for x in authors))
            )
        index = build_index(articles)
        # entry-by-entry transpose check, both directions
        for doc, row in enumerate(index.doc_to_authors):
            for author in range(index.n_authors):
                forward = author in row
                backward = doc in index.author_to_docs[author]
                assert forward == backward
        edges = sum(len(r) for r in index.doc_to_authors)
        assert edges == sum(len(r) for r in index.author_to_docs)

    def test_dense_ids_follow_first_appearance(self, sample_index):
        assert [a.author_id for a in sample_index.authors] == ["3", "4", "5", "1", "2", "6"]

    def test_build_is_deterministic(self, sample_articles, sample_names):
        first = build_index(sample_articles, sample_names)
        second = build_index(sample_articles, sample_names)
        assert first.doc_index == second.doc_index
        assert first.author_index == second.author_index
        assert first.doc_to_authors == second.doc_to_authors
        assert first.author_to_docs == second.author_to_docs

"""Corpus ingestion and the immutable bipartite author-document index.

Corpus files are UTF-8 JSON lines, one article per line:

    {"doc_id": "...", "title": "...", "abstract": "...",
     "authors": [{"id": "...", "name": "..."}, ...],
     "affiliations": ["..."], "date": "YYYY-MM-DD"}

`affiliations` and `date` are optional display metadata and never influence
scoring. Ingestion is lenient by default: malformed lines are reported and
skipped so one bad record cannot block an index build; `strict=True` aborts
on the first bad line. Duplicate doc_ids are always fatal.
"""

from __future__ import annotations

import datetime
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusFormatError, DuplicateDocIdError
from .textmodel import tokenize as _tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Article:
    """One corpus record. author_ids is ordered and non-empty."""

    doc_id: str
    title: str
    abstract: str
    author_ids: tuple[str, ...]
    affiliations: tuple[str, ...] = ()
    published_on: str | None = None

    @property
    def text(self) -> str:
        """Modeling text: title and abstract joined by a single space."""
        return f"{self.title} {self.abstract}".strip()


@dataclass(frozen=True)
class AuthorRecord:
    """An indexed author and the doc_ids of everything they wrote."""

    author_id: str
    display_name: str
    doc_ids: tuple[str, ...]


@dataclass(frozen=True)
class IngestError:
    line: int
    message: str


@dataclass(frozen=True)
class BipartiteIndex:
    """Immutable author-document adjacency with dense indices both ways.

    Dense indices follow first appearance in the article list, so every
    downstream tie-break is deterministic. `doc_to_authors` and
    `author_to_docs` are exact transposes of each other; rows are sorted
    ascending.
    """

    documents: tuple[Article, ...]
    authors: tuple[AuthorRecord, ...]
    doc_to_authors: tuple[tuple[int, ...], ...]
    author_to_docs: tuple[tuple[int, ...], ...]
    doc_index: dict = field(repr=False)
    author_index: dict = field(repr=False)

    @property
    def n_documents(self) -> int:
        return len(self.documents)

    @property
    def n_authors(self) -> int:
        return len(self.authors)


def _parse_record(record: dict, line: int) -> tuple[Article, dict[str, str]]:
    if not isinstance(record, dict):
        raise CorpusFormatError("record is not a JSON object", line)
    doc_id = record.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise CorpusFormatError("missing or empty 'doc_id'", line)
    title = record.get("title", "")
    abstract = record.get("abstract", "")
    if not isinstance(title, str) or not isinstance(abstract, str):
        raise CorpusFormatError("'title' and 'abstract' must be strings", line)

    authors = record.get("authors")
    if not isinstance(authors, list) or not authors:
        raise CorpusFormatError("missing or empty 'authors'", line)
    author_ids: list[str] = []
    names: dict[str, str] = {}
    for entry in authors:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str) or not entry["id"]:
            raise CorpusFormatError("author entries need a non-empty string 'id'", line)
        author_id = entry["id"]
        if author_id in author_ids:
            continue  # repeated author on one article: keep first
        author_ids.append(author_id)
        names[author_id] = entry.get("name") or author_id

    affiliations = record.get("affiliations", [])
    if not isinstance(affiliations, list) or not all(isinstance(x, str) for x in affiliations):
        raise CorpusFormatError("'affiliations' must be an array of strings", line)

    date = record.get("date")
    if date is not None:
        if not isinstance(date, str):
            raise CorpusFormatError("'date' must be an ISO date string", line)
        try:
            datetime.date.fromisoformat(date)
        except ValueError:
            raise CorpusFormatError(f"bad 'date' value {date!r}", line) from None

    article = Article(
        doc_id=doc_id,
        title=title,
        abstract=abstract,
        author_ids=tuple(author_ids),
        affiliations=tuple(affiliations),
        published_on=date,
    )
    # Validation uses no stopword list: a record must carry at least one
    # word token of length >= 2 to be indexable at all.
    if not _tokenize(article.text, stopwords=frozenset()):
        raise CorpusFormatError("title+abstract yield no usable tokens", line)
    return article, names


def load_corpus(
    path: str | Path,
    *,
    strict: bool = False,
    report: list[IngestError] | None = None,
) -> list[Article]:
    """Load all valid articles from a JSON-lines corpus file, in file order.

    Rejected lines are logged and appended to `report` when given; with
    `strict=True` the first bad line raises instead. Duplicate doc_ids
    raise DuplicateDocIdError regardless of mode.
    """
    articles, _ = load_corpus_with_names(path, strict=strict, report=report)
    return articles


def load_corpus_with_names(
    path: str | Path,
    *,
    strict: bool = False,
    report: list[IngestError] | None = None,
) -> tuple[list[Article], dict[str, str]]:
    """Like load_corpus, also returning the author id -> display name map."""
    path = Path(path)
    articles: list[Article] = []
    names: dict[str, str] = {}
    seen_ids: set[str] = set()
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusFormatError(f"invalid JSON ({exc.msg})", line_number) from None
                article, line_names = _parse_record(record, line_number)
            except CorpusFormatError as exc:
                if strict:
                    raise
                logger.warning("skipping corpus %s: %s", path.name, exc)
                if report is not None:
                    report.append(IngestError(line_number, exc.bare_message))
                continue
            if article.doc_id in seen_ids:
                raise DuplicateDocIdError(
                    f"duplicate doc_id {article.doc_id!r} at line {line_number}"
                )
            seen_ids.add(article.doc_id)
            articles.append(article)
            for author_id, name in line_names.items():
                names.setdefault(author_id, name)  # first occurrence wins
    return articles, names


def write_corpus(articles: list[Article], path: str | Path, names: dict[str, str] | None = None) -> None:
    """Write articles back to the JSON-lines corpus format (round-trips load_corpus)."""
    names = names or {}
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for article in articles:
            record = {
                "doc_id": article.doc_id,
                "title": article.title,
                "abstract": article.abstract,
                "authors": [
                    {"id": author_id, "name": names.get(author_id, author_id)}
                    for author_id in article.author_ids
                ],
            }
            if article.affiliations:
                record["affiliations"] = list(article.affiliations)
            if article.published_on is not None:
                record["date"] = article.published_on
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def build_index(articles: list[Article], names: dict[str, str] | None = None) -> BipartiteIndex:
    """Build the bipartite index; dense ids follow first appearance order."""
    names = names or {}
    doc_index: dict[str, int] = {}
    author_index: dict[str, int] = {}
    author_ids: list[str] = []
    for article in articles:
        if article.doc_id in doc_index:
            raise DuplicateDocIdError(f"duplicate doc_id {article.doc_id!r}")
        if not article.author_ids:
            raise CorpusFormatError(f"article {article.doc_id!r} has no authors")
        doc_index[article.doc_id] = len(doc_index)
        for author_id in article.author_ids:
            if author_id not in author_index:
                author_index[author_id] = len(author_index)
                author_ids.append(author_id)

    doc_to_authors = tuple(
        tuple(sorted(author_index[a] for a in set(article.author_ids)))
        for article in articles
    )
    docs_by_author: list[list[int]] = [[] for _ in author_ids]
    for doc, row in enumerate(doc_to_authors):
        for author in row:
            docs_by_author[author].append(doc)
    author_to_docs = tuple(tuple(row) for row in docs_by_author)

    authors = tuple(
        AuthorRecord(
            author_id=author_id,
            display_name=names.get(author_id, author_id),
            doc_ids=tuple(articles[d].doc_id for d in author_to_docs[e]),
        )
        for e, author_id in enumerate(author_ids)
    )
    return BipartiteIndex(
        documents=tuple(articles),
        authors=authors,
        doc_to_authors=doc_to_authors,
        author_to_docs=author_to_docs,
        doc_index=doc_index,
        author_index=author_index,
    )


def docs_of_author(index: BipartiteIndex, author: int) -> set[int]:
    """Dense doc indices with A[d][author] = 1."""
    if not 0 <= author < index.n_authors:
        raise IndexError(f"author index {author} out of range")
    return set(index.author_to_docs[author])

"""Text representations for queries and documents.

Two regimes are supported:

* sparse TF-IDF vectors (raw term frequency, smoothed idf
  ``ln((N+1)/(df+1)) + 1``, L2-normalized), compared by cosine;
* normalized bag-of-words (nBOW) distributions over word-embedding
  vectors, compared by optimal-transport distance.

A query is the title concatenated with the abstract; documents are
modeled from the same concatenation for symmetry.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import EmbeddingFormatError, EmptyQueryError, EmptyRepresentationError

if TYPE_CHECKING:  # avoids a circular import; corpus imports tokenize
    from .corpus import BipartiteIndex

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)

# Small default English list; replaceable via a one-token-per-line file.
DEFAULT_STOPWORDS = frozenset(
    """a an the and or but if then else of in on at to from by for with as is are
    was were be been being am do does did not no nor this that these those it its
    we our you your they their he she his her them us i me my so than too very can
    will just such own same other which who whom what when where why how all any
    both each few more most some there here out up down over under again once
    about between into through during before after above below""".split()
)


def tokenize(
    text: str,
    stopwords: frozenset[str] | set[str] = DEFAULT_STOPWORDS,
    min_length: int = 2,
) -> list[str]:
    """Lowercased Unicode word tokens, minus stopwords and short tokens."""
    tokens = _TOKEN_RE.findall(text.lower())
    return [t for t in tokens if len(t) >= min_length and t not in stopwords]


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one token per line, blank lines ignored."""
    words = set()
    with Path(path).open("r", encoding="utf-8") as handle:
        for line in handle:
            token = line.strip().lower()
            if token:
                words.add(token)
    return frozenset(words)


@dataclass(frozen=True)
class Tokenizer:
    """Tokenization settings, persisted with the index so query-time
    tokenization always matches build-time tokenization."""

    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    min_token_length: int = 2

    def __call__(self, text: str) -> list[str]:
        return tokenize(text, stopwords=self.stopwords, min_length=self.min_token_length)


@dataclass(frozen=True)
class QueryText:
    """A query: raw title+abstract text and its token list (never empty)."""

    raw: str
    tokens: tuple[str, ...]


def build_query(title: str, abstract: str, tokenizer: Tokenizer = Tokenizer()) -> QueryText:
    """Concatenate title and abstract and tokenize; empty queries are rejected."""
    raw = f"{title} {abstract}".strip()
    tokens = tokenizer(raw)
    if not tokens:
        raise EmptyQueryError("query has no usable tokens")
    return QueryText(raw=raw, tokens=tuple(tokens))


# ---------------------------------------------------------------------------
# TF-IDF regime
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseVector:
    """Sorted sparse vector; either empty or with a strictly positive norm."""

    dims: np.ndarray
    weights: np.ndarray
    norm: float

    @classmethod
    def empty(cls) -> "SparseVector":
        return cls(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64), 0.0)

    @classmethod
    def from_pairs(cls, pairs: dict[int, float]) -> "SparseVector":
        if not pairs:
            return cls.empty()
        dims = np.array(sorted(pairs), dtype=np.int64)
        weights = np.array([pairs[int(d)] for d in dims], dtype=np.float64)
        return cls(dims, weights, float(np.linalg.norm(weights)))

    @property
    def is_empty(self) -> bool:
        return self.dims.size == 0

    def normalized(self) -> "SparseVector":
        if self.is_empty or self.norm == 0.0:
            return SparseVector.empty()
        return SparseVector(self.dims, self.weights / self.norm, 1.0)

    @classmethod
    def mean(cls, vectors: Sequence["SparseVector"]) -> "SparseVector":
        """Arithmetic mean over the union of dimensions (not renormalized)."""
        accumulator: dict[int, float] = {}
        for vector in vectors:
            for dim, weight in zip(vector.dims.tolist(), vector.weights.tolist()):
                accumulator[dim] = accumulator.get(dim, 0.0) + weight
        count = max(len(vectors), 1)
        return cls.from_pairs({d: w / count for d, w in accumulator.items()})


@dataclass(frozen=True)
class TfidfModel:
    """Vocabulary, per-token document frequencies, and fitted corpus size."""

    vocabulary: dict
    document_frequencies: np.ndarray
    corpus_size: int

    @classmethod
    def from_token_lists(cls, token_lists: Iterable[Sequence[str]]) -> "TfidfModel":
        vocabulary: dict[str, int] = {}
        df_counts: list[int] = []
        corpus_size = 0
        for tokens in token_lists:
            corpus_size += 1
            for token in dict.fromkeys(tokens):  # unique, first-appearance order
                dim = vocabulary.get(token)
                if dim is None:
                    vocabulary[token] = len(vocabulary)
                    df_counts.append(1)
                else:
                    df_counts[dim] += 1
        return cls(
            vocabulary=vocabulary,
            document_frequencies=np.array(df_counts, dtype=np.int64),
            corpus_size=corpus_size,
        )

    def idf(self, dim: int) -> float:
        df = float(self.document_frequencies[dim])
        return float(np.log((self.corpus_size + 1.0) / (df + 1.0)) + 1.0)


def fit_tfidf(index: "BipartiteIndex", tokenizer: Tokenizer = Tokenizer()) -> TfidfModel:
    """Fit vocabulary and document frequencies over all indexed documents."""
    return TfidfModel.from_token_lists(tokenizer(a.text) for a in index.documents)


def vectorize_tfidf(model: TfidfModel, tokens: Sequence[str]) -> SparseVector:
    """tf * smoothed-idf weights, L2-normalized; OOV tokens are dropped.

    All tokens out of vocabulary yields the empty vector; similarity
    against an empty vector is defined as 0 by the cosine operation.
    """
    counts = Counter(token for token in tokens if token in model.vocabulary)
    if not counts:
        return SparseVector.empty()
    pairs = {
        model.vocabulary[token]: count * model.idf(model.vocabulary[token])
        for token, count in counts.items()
    }
    return SparseVector.from_pairs(pairs).normalized()


# ---------------------------------------------------------------------------
# Embedding / nBOW regime
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingStore:
    """Token -> dense vector map; every vector has the declared dimension."""

    dimension: int
    vectors: dict

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, token: str) -> np.ndarray:
        return self.vectors[token]


def load_embeddings(path: str | Path) -> EmbeddingStore:
    """Parse word2vec text format: header "vocab_count dimension", then one
    token and its components per line. Duplicates keep the first occurrence."""
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    with path.open("r", encoding="utf-8") as handle:
        header = handle.readline()
        parts = header.split()
        if len(parts) != 2:
            raise EmbeddingFormatError("header must be 'vocab_count dimension'", line=1)
        try:
            vocab_count, dimension = int(parts[0]), int(parts[1])
        except ValueError:
            raise EmbeddingFormatError("header must be 'vocab_count dimension'", line=1) from None
        if vocab_count < 0 or dimension <= 0:
            raise EmbeddingFormatError("header counts must be positive", line=1)

        line_number = 1
        for line in handle:
            line_number += 1
            if not line.strip():
                continue
            fields = line.rstrip("\n").split(" ")
            token = fields[0]
            if len(fields) - 1 != dimension:
                raise EmbeddingFormatError(
                    f"expected {dimension} components, found {len(fields) - 1}",
                    line=line_number,
                )
            try:
                vector = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError:
                raise EmbeddingFormatError("non-numeric vector component", line=line_number) from None
            if not np.all(np.isfinite(vector)):
                raise EmbeddingFormatError("non-finite vector component", line=line_number)
            if token in vectors:
                logger.warning("duplicate embedding token %r at line %d; keeping first", token, line_number)
                continue
            vectors[token] = vector
    if len(vectors) != vocab_count:
        logger.warning(
            "embedding header declared %d tokens, file provided %d", vocab_count, len(vectors)
        )
    return EmbeddingStore(dimension=dimension, vectors=vectors)


def write_embeddings(store: EmbeddingStore, path: str | Path) -> None:
    """Write a store back to the word2vec text format (round-trips load)."""
    with Path(path).open("w", encoding="utf-8") as handle:
        handle.write(f"{len(store.vectors)} {store.dimension}\n")
        for token, vector in store.vectors.items():
            components = " ".join(repr(float(x)) for x in vector)
            handle.write(f"{token} {components}\n")


@dataclass(frozen=True)
class NBowDoc:
    """Normalized bag-of-words: positive masses summing to 1 over unique
    embedded tokens, with their vectors resolved once at construction."""

    tokens: tuple[str, ...]
    masses: np.ndarray
    vectors: np.ndarray

    @property
    def is_empty(self) -> bool:
        return len(self.tokens) == 0

    @property
    def centroid(self) -> np.ndarray:
        return self.masses @ self.vectors

    @classmethod
    def empty(cls, dimension: int) -> "NBowDoc":
        return cls((), np.empty(0, dtype=np.float64), np.empty((0, dimension), dtype=np.float64))


def to_nbow(tokens: Sequence[str], store: EmbeddingStore) -> NBowDoc:
    """Drop OOV tokens and normalize the remaining counts to a distribution.

    Raises EmptyRepresentationError when no token is in the store (the text
    cannot be scored under the transport regime).
    """
    counts = Counter(token for token in tokens if token in store)
    if not counts:
        raise EmptyRepresentationError("no token of the text is in the embedding store")
    ordered = [t for t in dict.fromkeys(tokens) if t in counts]
    masses = np.array([counts[t] for t in ordered], dtype=np.float64)
    masses /= masses.sum()
    vectors = np.stack([store.get(t) for t in ordered])
    return NBowDoc(tokens=tuple(ordered), masses=masses, vectors=vectors)


def nbow_or_empty(tokens: Sequence[str], store: EmbeddingStore) -> NBowDoc:
    """Document-side variant of to_nbow: an all-OOV document is allowed and
    simply becomes unscorable (maximal distance) instead of raising."""
    try:
        return to_nbow(tokens, store)
    except EmptyRepresentationError:
        return NBowDoc.empty(store.dimension)


def nbow_mean(parts: Sequence[NBowDoc]) -> NBowDoc:
    """Mean of distributions over the union of their tokens; still sums to 1."""
    nonempty = [p for p in parts if not p.is_empty]
    if not nonempty:
        raise EmptyRepresentationError("cannot average empty distributions")
    count = len(parts)
    masses: dict[str, float] = {}
    vectors: dict[str, np.ndarray] = {}
    for part in nonempty:
        for token, mass, vector in zip(part.tokens, part.masses.tolist(), part.vectors):
            masses[token] = masses.get(token, 0.0) + mass / count
            vectors.setdefault(token, vector)
    ordered = list(masses)
    mass_array = np.array([masses[t] for t in ordered], dtype=np.float64)
    mass_array /= mass_array.sum()  # guard float drift; mathematically already 1
    return NBowDoc(
        tokens=tuple(ordered),
        masses=mass_array,
        vectors=np.stack([vectors[t] for t in ordered]),
    )

"""Query-document similarity under two regimes.

* ``tfidf-cosine``: cosine between L2-normalized sparse vectors.
* ``wmd``: exact optimal-transport distance between nBOW distributions
  (Euclidean ground cost between word vectors), mapped to a similarity by
  ``s = 1 / (1 + distance)``.

The transport regime supports a pruning cascade (centroid bound, then
relaxed one-sided bounds, then the exact solver) that provably reproduces
the exhaustive top-m documents: a document is only left with a bound-derived
score when the bound already proves it cannot reach the top m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ConfigError, EmptyRepresentationError
from .textmodel import (
    EmbeddingStore,
    NBowDoc,
    SparseVector,
    TfidfModel,
    Tokenizer,
    fit_tfidf,
    nbow_or_empty,
    vectorize_tfidf,
)
from .transport import solve_transport

if TYPE_CHECKING:
    from .corpus import BipartiteIndex

REGIME_TFIDF = "tfidf-cosine"
REGIME_WMD = "wmd"
REGIMES = (REGIME_TFIDF, REGIME_WMD)

DEFAULT_PRUNE_CANDIDATES = 200


@dataclass(frozen=True)
class ScoringConfig:
    """`regime` selects the representation; `prune_candidates` bounds the
    number of exact transport solves (None means exhaustive)."""

    regime: str = REGIME_TFIDF
    prune_candidates: int | None = DEFAULT_PRUNE_CANDIDATES

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ConfigError(f"unknown regime {self.regime!r}; expected one of {REGIMES}")
        if self.prune_candidates is not None and self.prune_candidates < 1:
            raise ConfigError("prune_candidates must be >= 1")


@dataclass(frozen=True)
class TransportPlan:
    """Optimal flow between two token sets; rows follow the source masses."""

    flow: np.ndarray
    objective: float

    def check_feasible(self, source: np.ndarray, sink: np.ndarray, atol: float = 1e-7) -> None:
        if np.any(self.flow < 0):
            raise AssertionError("negative flow in transport plan")
        if not np.allclose(self.flow.sum(axis=1), source, atol=atol):
            raise AssertionError("row sums do not match source masses")
        if not np.allclose(self.flow.sum(axis=0), sink, atol=atol):
            raise AssertionError("column sums do not match sink masses")


@dataclass(frozen=True)
class SimilarityTable:
    """Per-document query similarity (higher = more similar).

    For the transport regime, `distances` keeps the underlying distance
    (lower bound for pruned documents, +inf for documents with no embedded
    token) and `approximate` marks entries whose similarity derives from a
    bound rather than an exact solve.
    """

    regime: str
    similarities: np.ndarray
    distances: np.ndarray | None = None
    approximate: np.ndarray | None = None

    def __len__(self) -> int:
        return int(self.similarities.size)


@dataclass(frozen=True)
class TfidfRepresentations:
    """Materialized sparse document vectors under a fitted TF-IDF model."""

    model: TfidfModel
    vectors: tuple[SparseVector, ...]

    regime = REGIME_TFIDF

    @property
    def n_documents(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class NBowRepresentations:
    """Materialized nBOW distributions plus per-document centroids.

    Documents whose every token is out of the embedding vocabulary carry an
    empty distribution; they score 0 against every query.
    """

    store: EmbeddingStore
    nbows: tuple[NBowDoc, ...]
    centroids: np.ndarray
    empty_mask: np.ndarray

    regime = REGIME_WMD

    @property
    def n_documents(self) -> int:
        return len(self.nbows)


def build_representations(
    index: "BipartiteIndex",
    regime: str,
    tokenizer: Tokenizer = Tokenizer(),
    store: EmbeddingStore | None = None,
):
    """Precompute per-document representations for the chosen regime."""
    if regime == REGIME_TFIDF:
        model = fit_tfidf(index, tokenizer)
        vectors = tuple(vectorize_tfidf(model, tokenizer(a.text)) for a in index.documents)
        return TfidfRepresentations(model=model, vectors=vectors)
    if regime == REGIME_WMD:
        if store is None:
            raise ConfigError("the wmd regime requires an embedding store")
        nbows = tuple(nbow_or_empty(tokenizer(a.text), store) for a in index.documents)
        return representations_from_nbows(store, nbows)
    raise ConfigError(f"unknown regime {regime!r}; expected one of {REGIMES}")


def representations_from_nbows(
    store: EmbeddingStore, nbows: Sequence[NBowDoc]
) -> NBowRepresentations:
    centroids = np.zeros((len(nbows), store.dimension))
    empty_mask = np.zeros(len(nbows), dtype=bool)
    for position, nbow in enumerate(nbows):
        if nbow.is_empty:
            empty_mask[position] = True
        else:
            centroids[position] = nbow.centroid
    return NBowRepresentations(
        store=store, nbows=tuple(nbows), centroids=centroids, empty_mask=empty_mask
    )


# ---------------------------------------------------------------------------
# Pairwise operations
# ---------------------------------------------------------------------------


def cosine(u: SparseVector, v: SparseVector) -> float:
    """u.v / (|u||v|); defined as 0 when either vector is empty."""
    if u.is_empty or v.is_empty:
        return 0.0
    _, iu, iv = np.intersect1d(u.dims, v.dims, assume_unique=True, return_indices=True)
    if iu.size == 0:
        return 0.0
    return float(u.weights[iu] @ v.weights[iv]) / (u.norm * v.norm)


def _ground_cost(a: NBowDoc, b: NBowDoc) -> np.ndarray:
    return cdist(a.vectors, b.vectors)


def wmd_exact(a: NBowDoc, b: NBowDoc) -> tuple[float, TransportPlan]:
    """Exact transport distance between two distributions and its plan."""
    if a.is_empty or b.is_empty:
        raise EmptyRepresentationError("cannot compute transport distance of an empty distribution")
    objective, flow = solve_transport(a.masses, b.masses, _ground_cost(a, b))
    return objective, TransportPlan(flow=flow, objective=objective)


def wcd_lower_bound(a: NBowDoc, b: NBowDoc) -> float:
    """Centroid distance; never exceeds the exact transport distance."""
    if a.is_empty or b.is_empty:
        raise EmptyRepresentationError("cannot bound the distance of an empty distribution")
    return float(np.linalg.norm(a.centroid - b.centroid))


def rwmd_lower_bound(a: NBowDoc, b: NBowDoc) -> float:
    """Tighter bound: max of the two one-sided relaxations, each routing
    every token's mass to its nearest counterpart."""
    if a.is_empty or b.is_empty:
        raise EmptyRepresentationError("cannot bound the distance of an empty distribution")
    cost = _ground_cost(a, b)
    forward = float(a.masses @ cost.min(axis=1))
    backward = float(b.masses @ cost.min(axis=0))
    return max(forward, backward)


def distance_to_similarity(distance: np.ndarray | float):
    """s = 1/(1+d): bounded, positive, strictly order-reversing."""
    return 1.0 / (1.0 + distance)


# ---------------------------------------------------------------------------
# Corpus-wide scoring
# ---------------------------------------------------------------------------


def score_all_documents(query_rep, representations, config: ScoringConfig | None = None) -> SimilarityTable:
    """Score the query against every indexed document.

    The query representation must match the representations' regime:
    a SparseVector for tfidf-cosine, an NBowDoc for wmd.
    """
    if config is None:
        config = ScoringConfig(regime=representations.regime, prune_candidates=None)
    if config.regime != representations.regime:
        raise ConfigError(
            f"configured regime {config.regime!r} does not match representations "
            f"({representations.regime!r})"
        )
    if isinstance(representations, TfidfRepresentations):
        return _score_cosine(query_rep, representations)
    if isinstance(representations, NBowRepresentations):
        return _score_wmd(query_rep, representations, config.prune_candidates)
    raise ConfigError(f"unsupported representations type {type(representations).__name__}")


def _score_cosine(query: SparseVector, reps: TfidfRepresentations) -> SimilarityTable:
    if not isinstance(query, SparseVector):
        raise ConfigError("tfidf-cosine scoring expects a SparseVector query")
    if query.is_empty:
        raise EmptyRepresentationError("query vector is empty (all tokens out of vocabulary)")
    sims = np.array([cosine(query, vector) for vector in reps.vectors], dtype=np.float64)
    return SimilarityTable(regime=REGIME_TFIDF, similarities=sims)


def _score_wmd(query: NBowDoc, reps: NBowRepresentations, prune: int | None) -> SimilarityTable:
    if not isinstance(query, NBowDoc):
        raise ConfigError("wmd scoring expects an NBowDoc query")
    if query.is_empty:
        raise EmptyRepresentationError("query distribution is empty")

    n_docs = reps.n_documents
    distances = np.full(n_docs, np.inf)
    approximate = np.zeros(n_docs, dtype=bool)

    # Centroid bound for every scorable document (stays +inf for empty ones).
    scorable = np.flatnonzero(~reps.empty_mask)
    wcd = np.full(n_docs, np.inf)
    if scorable.size:
        wcd[scorable] = np.linalg.norm(reps.centroids[scorable] - query.centroid, axis=1)

    if prune is None or scorable.size <= prune:
        for doc in scorable:
            distances[doc], _ = wmd_exact(query, reps.nbows[doc])
        sims = distance_to_similarity(distances)
        return SimilarityTable(REGIME_WMD, sims, distances=distances, approximate=approximate)

    # Ascending centroid-bound order, ties by document index.
    order = [int(d) for d in np.lexsort((np.arange(n_docs), wcd)) if not reps.empty_mask[d]]
    exact: list[float] = []
    for doc in order[:prune]:
        distances[doc], _ = wmd_exact(query, reps.nbows[doc])
        exact.append(distances[doc])
    threshold = sorted(exact)[prune - 1]

    # A pruned document keeps its best lower bound; the bound exceeding the
    # current m-th exact distance proves it cannot enter the top m.
    for doc in order[prune:]:
        if wcd[doc] > threshold:
            distances[doc] = wcd[doc]
            approximate[doc] = True
            continue
        relaxed = rwmd_lower_bound(query, reps.nbows[doc])
        if relaxed > threshold:
            distances[doc] = relaxed
            approximate[doc] = True
            continue
        distances[doc], _ = wmd_exact(query, reps.nbows[doc])
        exact.append(distances[doc])
        threshold = min(threshold, sorted(exact)[prune - 1])

    sims = distance_to_similarity(distances)
    return SimilarityTable(REGIME_WMD, sims, distances=distances, approximate=approximate)

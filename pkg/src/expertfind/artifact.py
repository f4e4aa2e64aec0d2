"""Versioned on-disk snapshot of an index plus its document representations.

The snapshot is canonical JSON (sorted keys, fixed separators, repr-exact
floats), so building twice from the same inputs yields byte-identical files
and save/load round-trips exactly. Embedding vector tables are not copied
into the artifact; the artifact records the embeddings path it was built
from and the store is reloaded from there (or from an explicit override).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .corpus import Article, build_index
from .engine import ExpertFinder
from .errors import ConfigError, DataError
from .similarity import (
    DEFAULT_PRUNE_CANDIDATES,
    NBowRepresentations,
    REGIME_TFIDF,
    REGIME_WMD,
    TfidfRepresentations,
    representations_from_nbows,
)
from .textmodel import (
    EmbeddingStore,
    NBowDoc,
    SparseVector,
    TfidfModel,
    Tokenizer,
    load_embeddings,
)

FORMAT_VERSION = 1


def _article_record(article: Article, names: dict) -> dict:
    return {
        "doc_id": article.doc_id,
        "title": article.title,
        "abstract": article.abstract,
        "authors": [
            {"id": author_id, "name": names.get(author_id, author_id)}
            for author_id in article.author_ids
        ],
        "affiliations": list(article.affiliations),
        "date": article.published_on,
    }


def save_artifact(
    finder: ExpertFinder,
    path: str | Path,
    *,
    embeddings_path: str | None = None,
) -> None:
    """Serialize the finder's index and representations to canonical JSON."""
    names = {a.author_id: a.display_name for a in finder.index.authors}
    payload: dict = {
        "format_version": FORMAT_VERSION,
        "regime": finder.regime,
        "tokenizer": {
            "stopwords": sorted(finder.tokenizer.stopwords),
            "min_token_length": finder.tokenizer.min_token_length,
        },
        "articles": [_article_record(a, names) for a in finder.index.documents],
    }
    reps = finder.representations
    if isinstance(reps, TfidfRepresentations):
        ordered_vocabulary = sorted(reps.model.vocabulary, key=reps.model.vocabulary.get)
        payload["tfidf"] = {
            "vocabulary": ordered_vocabulary,
            "document_frequencies": reps.model.document_frequencies.tolist(),
            "corpus_size": reps.model.corpus_size,
            "doc_vectors": [
                {"dims": v.dims.tolist(), "weights": v.weights.tolist(), "norm": v.norm}
                for v in reps.vectors
            ],
        }
    elif isinstance(reps, NBowRepresentations):
        if embeddings_path is None:
            raise ConfigError("embeddings_path is required to persist a wmd-regime artifact")
        payload["nbow"] = {
            "embeddings_path": str(embeddings_path),
            "docs": [
                {"tokens": list(n.tokens), "masses": n.masses.tolist()} for n in reps.nbows
            ],
        }
    else:
        raise ConfigError(f"cannot persist representations of type {type(reps).__name__}")

    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_artifact(
    path: str | Path,
    *,
    embeddings_path: str | None = None,
    store: EmbeddingStore | None = None,
    prune_candidates: int | None = DEFAULT_PRUNE_CANDIDATES,
) -> ExpertFinder:
    """Rebuild an ExpertFinder from a snapshot.

    For wmd artifacts the embedding store is taken from `store`, else loaded
    from `embeddings_path`, else from the path recorded in the artifact.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read index artifact {path}: {exc}") from exc
    if payload.get("format_version") != FORMAT_VERSION:
        raise DataError(
            f"unsupported artifact version {payload.get('format_version')!r} in {path}"
        )

    names: dict[str, str] = {}
    articles = []
    for record in payload["articles"]:
        articles.append(
            Article(
                doc_id=record["doc_id"],
                title=record["title"],
                abstract=record["abstract"],
                author_ids=tuple(entry["id"] for entry in record["authors"]),
                affiliations=tuple(record.get("affiliations") or ()),
                published_on=record.get("date"),
            )
        )
        for entry in record["authors"]:
            names.setdefault(entry["id"], entry.get("name") or entry["id"])
    index = build_index(articles, names)
    tokenizer = Tokenizer(
        stopwords=frozenset(payload["tokenizer"]["stopwords"]),
        min_token_length=payload["tokenizer"]["min_token_length"],
    )

    regime = payload["regime"]
    if regime == REGIME_TFIDF:
        block = payload["tfidf"]
        model = TfidfModel(
            vocabulary={token: dim for dim, token in enumerate(block["vocabulary"])},
            document_frequencies=np.array(block["document_frequencies"], dtype=np.int64),
            corpus_size=block["corpus_size"],
        )
        vectors = tuple(
            SparseVector(
                dims=np.array(v["dims"], dtype=np.int64),
                weights=np.array(v["weights"], dtype=np.float64),
                norm=float(v["norm"]),
            )
            for v in block["doc_vectors"]
        )
        representations = TfidfRepresentations(model=model, vectors=vectors)
    elif regime == REGIME_WMD:
        block = payload["nbow"]
        if store is None:
            source = embeddings_path or block.get("embeddings_path")
            if not source:
                raise ConfigError("wmd artifact needs an embedding store to load")
            store = load_embeddings(source)
        nbows = []
        for record in block["docs"]:
            tokens = tuple(record["tokens"])
            if not tokens:
                nbows.append(NBowDoc.empty(store.dimension))
                continue
            missing = [t for t in tokens if t not in store]
            if missing:
                raise DataError(
                    f"embedding store lacks tokens required by the artifact: {missing[:5]}"
                )
            nbows.append(
                NBowDoc(
                    tokens=tokens,
                    masses=np.array(record["masses"], dtype=np.float64),
                    vectors=np.stack([store.get(t) for t in tokens]),
                )
            )
        representations = representations_from_nbows(store, nbows)
    else:
        raise DataError(f"artifact declares unknown regime {regime!r}")

    return ExpertFinder(
        index=index,
        tokenizer=tokenizer,
        representations=representations,
        prune_candidates=prune_candidates,
    )

"""Operational entry points.

Subcommands:

* ``build-index``: ingest a corpus, precompute representations, persist
  the artifact.
* ``query``: rank candidate reviewers for a title+abstract.
* ``eval``: aggregate MRR or precision@k over a labeled query file.
* ``serve``: run the HTTP service from a TOML config.

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import socket
import sys
from pathlib import Path

from .artifact import load_artifact, save_artifact
from .corpus import load_corpus_with_names
from .engine import ExpertFinder
from .errors import ConfigError, DataError, EmptyQueryError, ExpertFindError
from .expertrank import DEFAULT_TOP_K, FUSION_METHODS, FusionConfig
from .feedback import FeedbackLog
from .similarity import REGIME_TFIDF, REGIME_WMD, REGIMES
from .textmodel import Tokenizer, load_embeddings, load_stopwords

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expertfind", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build-index", help="build and persist index + representations")
    build.add_argument("--corpus", required=True, help="JSON-lines corpus file")
    build.add_argument("--embeddings", help="word2vec text file (required for regime wmd)")
    build.add_argument("--regime", default=REGIME_TFIDF, choices=REGIMES)
    build.add_argument("--out", required=True, help="artifact output path")
    build.add_argument("--stopwords", help="stopword file, one token per line")
    build.add_argument("--strict", action="store_true", help="abort on the first bad corpus line")

    query = sub.add_parser("query", help="rank candidate reviewers for one query")
    query.add_argument("--index", required=True, help="artifact path")
    query.add_argument("--title", default="")
    query.add_argument("--abstract", default="")
    query.add_argument("--fusion", default="rr", choices=FUSION_METHODS)
    query.add_argument("--top", type=int, default=DEFAULT_TOP_K)
    query.add_argument("--json", action="store_true", help="machine-readable output")
    query.add_argument("--embeddings", help="override the embeddings path recorded in the artifact")

    evaluate = sub.add_parser("eval", help="evaluate ranking quality on labeled queries")
    evaluate.add_argument("--index", required=True, help="artifact path")
    evaluate.add_argument("--queries", required=True, help="JSON-lines eval file")
    evaluate.add_argument("--metric", default="mrr", help="mrr or p@K (e.g. p@9)")
    evaluate.add_argument("--fusion", default="rr", choices=FUSION_METHODS)
    evaluate.add_argument("--embeddings", help="override the embeddings path recorded in the artifact")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", required=True, help="TOML config file")
    return parser


def _cmd_build_index(args) -> int:
    if args.regime == REGIME_WMD and not args.embeddings:
        print("error: embeddings required for regime wmd", file=sys.stderr)
        return EXIT_USAGE
    tokenizer = Tokenizer()
    if args.stopwords:
        tokenizer = Tokenizer(stopwords=load_stopwords(args.stopwords))
    articles, names = load_corpus_with_names(args.corpus, strict=args.strict)
    if not articles:
        print(f"error: no valid articles in {args.corpus}", file=sys.stderr)
        return EXIT_DATA
    store = load_embeddings(args.embeddings) if args.embeddings else None
    finder = ExpertFinder.build(
        articles, regime=args.regime, names=names, tokenizer=tokenizer, store=store
    )
    save_artifact(finder, args.out, embeddings_path=args.embeddings)
    if args.regime == REGIME_TFIDF:
        vocabulary = len(finder.representations.model.vocabulary)
    else:
        vocabulary = len({t for n in finder.representations.nbows for t in n.tokens})
    print(
        f"documents: {finder.index.n_documents}\n"
        f"authors: {finder.index.n_authors}\n"
        f"vocabulary: {vocabulary}\n"
        f"artifact: {args.out}"
    )
    return EXIT_OK


def _load_finder(args) -> ExpertFinder:
    return load_artifact(args.index, embeddings_path=args.embeddings)


def _query_payload(finder: ExpertFinder, ranking, table, k: int) -> dict:
    entries = []
    for position, entry in enumerate(ranking.top(k), start=1):
        record = finder.index.authors[entry.author]
        entries.append(
            {
                "position": position,
                "author_id": record.author_id,
                "display_name": record.display_name,
                "score": entry.score,
                "documents": [
                    {
                        "doc_id": finder.index.documents[doc].doc_id,
                        "contribution": contribution,
                        "similarity": float(table.similarities[doc]),
                    }
                    for doc, contribution in sorted(
                        entry.contributions, key=lambda c: -c[1]
                    )
                ],
            }
        )
    return {"method": ranking.method, "experts": entries}


def _cmd_query(args) -> int:
    finder = _load_finder(args)
    fusion = FusionConfig(method=args.fusion, top_k=args.top)
    _, _, table, ranking = finder.search(args.title, args.abstract, fusion)
    payload = _query_payload(finder, ranking, table, args.top)
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False))
        return EXIT_OK
    for entry in payload["experts"]:
        docs = ", ".join(d["doc_id"] for d in entry["documents"])
        print(
            f"{entry['position']:>3}. {entry['author_id']}"
            f" ({entry['display_name']})  score={entry['score']:.6f}  docs: {docs}"
        )
    return EXIT_OK


_METRIC_RE = re.compile(r"^(mrr|p@(\d+))$")


def _cmd_eval(args) -> int:
    match = _METRIC_RE.match(args.metric.lower())
    if not match:
        print(f"error: unknown metric {args.metric!r}; use mrr or p@K", file=sys.stderr)
        return EXIT_USAGE
    precision_k = int(match.group(2)) if match.group(2) else None

    finder = _load_finder(args)
    fusion = FusionConfig(method=args.fusion)
    values: list[float] = []
    skipped = 0
    with open(args.queries, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                title = record.get("title", "")
                abstract = record.get("abstract", "")
                relevant_ids = record["relevant"]
                if not isinstance(relevant_ids, list) or not relevant_ids:
                    raise KeyError("relevant")
            except (json.JSONDecodeError, KeyError, TypeError):
                print(f"warning: line {line_number}: malformed eval record, skipped", file=sys.stderr)
                skipped += 1
                continue
            unresolved = [r for r in relevant_ids if r not in finder.index.author_index]
            if unresolved:
                print(
                    f"warning: line {line_number}: unresolvable author ids {unresolved}, record excluded",
                    file=sys.stderr,
                )
                skipped += 1
                continue
            try:
                _, _, _, ranking = finder.search(title, abstract, fusion)
            except EmptyQueryError:
                print(f"warning: line {line_number}: empty query, record excluded", file=sys.stderr)
                skipped += 1
                continue
            relevant = {finder.index.author_index[r] for r in relevant_ids}
            if precision_k is None:
                best = min(ranking.position_of(author) for author in relevant)
                values.append(1.0 / best)
            else:
                head = {e.author for e in ranking.top(precision_k)}
                values.append(len(head & relevant) / precision_k)

    if not values:
        print("error: no evaluable records", file=sys.stderr)
        return EXIT_DATA
    aggregate = sum(values) / len(values)
    label = "MRR" if precision_k is None else f"P@{precision_k}"
    print(f"{label}: {aggregate:.6f}  (queries: {len(values)}, skipped: {skipped})")
    return EXIT_OK


def _load_toml(path: str) -> dict:
    try:
        import tomllib  # py311+
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as handle:
        return tomllib.load(handle)


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import DEFAULT_SESSION_TTL_SECONDS, create_app

    config = _load_toml(args.config)
    index_path = config.get("index")
    if not index_path or not Path(index_path).exists():
        print(f"error: index artifact not found: {index_path!r}", file=sys.stderr)
        return EXIT_DATA
    embeddings = config.get("embeddings")
    if embeddings and not Path(embeddings).exists():
        print(f"error: embeddings file not found: {embeddings!r}", file=sys.stderr)
        return EXIT_DATA
    finder = load_artifact(
        index_path,
        embeddings_path=embeddings,
        prune_candidates=config.get("prune_candidates", 200),
    )
    if "regime" in config and config["regime"] != finder.regime:
        print(
            f"error: config regime {config['regime']!r} does not match artifact "
            f"({finder.regime!r})",
            file=sys.stderr,
        )
        return EXIT_DATA
    log_path = config.get("feedback_log", "feedback.log.jsonl")
    app = create_app(
        finder,
        feedback_log=FeedbackLog(log_path),
        top_k=int(config.get("top_k", DEFAULT_TOP_K)),
        default_fusion=config.get("fusion", "rr"),
        session_ttl_seconds=float(config.get("session_ttl_seconds", DEFAULT_SESSION_TTL_SECONDS)),
    )
    host = config.get("host", "127.0.0.1")
    port = int(os.environ.get("EXPERTFIND_PORT", config.get("port", 8080)))
    # Probe the port up front so "address in use" fails fast with a
    # distinct exit code instead of surfacing as a uvicorn SystemExit.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        print(f"error: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    finally:
        probe.close()
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"error: server failed to start on {host}:{port}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "build-index":
            return _cmd_build_index(args)
        if args.command == "query":
            return _cmd_query(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "serve":
            return _cmd_serve(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, EmptyQueryError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ExpertFindError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

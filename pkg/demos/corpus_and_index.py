"""Build the bipartite author-document index from a corpus file.

The corpus format is one JSON object per line. This script writes a tiny
three-article corpus, loads it back (showing the lenient error reporting),
and inspects the resulting adjacency.
"""

import json
import tempfile
from pathlib import Path

from expertfind import build_index, docs_of_author, load_corpus_with_names

records = [
    {
        "doc_id": "doc1",
        "title": "Spectral clustering of citation networks",
        "abstract": "We cluster citation graphs with spectral methods.",
        "authors": [{"id": "3", "name": "Ada"}, {"id": "4", "name": "Ben"}, {"id": "5", "name": "Cy"}],
        "affiliations": ["Univ A"],
        "date": "2015-03-01",
    },
    {
        "doc_id": "doc2",
        "title": "Expert retrieval with voting models",
        "abstract": "Voting models aggregate document evidence for expert retrieval.",
        "authors": [
            {"id": "1", "name": "Dee"},
            {"id": "2", "name": "Eli"},
            {"id": "3", "name": "Ada"},
            {"id": "6", "name": "Fay"},
        ],
    },
    {
        "doc_id": "doc3",
        "title": "Transport distances for text",
        "abstract": "Optimal transport compares word distributions.",
        "authors": [{"id": "6", "name": "Fay"}],
    },
]

with tempfile.TemporaryDirectory() as tmp:
    corpus_path = Path(tmp) / "corpus.jsonl"
    with corpus_path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")
        # one malformed line: ingestion reports it and keeps going
        handle.write('{"doc_id": "bad", "title": "no authors field"}\n')

    report = []
    articles, names = load_corpus_with_names(corpus_path, report=report)
    print(f"loaded {len(articles)} articles; {len(report)} rejected line(s)")
    for error in report:
        print(f"  line {error.line}: {error.message}")

###############################################################################
# The index assigns dense ids in first-appearance order and keeps both
# directions of the authorship relation, as exact transposes.
###############################################################################

index = build_index(articles, names)
print(f"\n|D| = {index.n_documents} documents, |C| = {index.n_authors} authors")

print("\nadjacency (doc -> authors):")
for doc, row in enumerate(index.doc_to_authors):
    ids = [index.authors[a].author_id for a in row]
    print(f"  {index.documents[doc].doc_id}: {ids}")

fay = index.author_index["6"]
print(f"\ndocuments of author 6 ({index.authors[fay].display_name}):",
      sorted(index.documents[d].doc_id for d in docs_of_author(index, fay)))

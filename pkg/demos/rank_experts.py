"""End-to-end reviewer ranking: query -> similarities -> author votes.

Shows the two fusion methods over the same similarity table: reciprocal
rank rewards authors with several well-ranked documents; the Bayesian
decomposition normalizes by each author's publication count.
"""

from expertfind import ExpertFinder, FusionConfig
from expertfind.corpus import Article

articles = [
    Article("d1", "Spectral clustering of citation networks",
            "We cluster citation graphs with spectral methods.", ("3", "4", "5")),
    Article("d2", "Expert retrieval with voting models",
            "Voting models aggregate document evidence for expert retrieval.", ("1", "2", "3", "6")),
    Article("d3", "Transport distances for text",
            "Optimal transport compares word distributions.", ("6",)),
]

finder = ExpertFinder.build(articles, names={str(i): f"Author {i}" for i in range(1, 7)})

title, abstract = "expert retrieval", "evidence transport"
query, rep, table, _ = finder.search(title, abstract)

print(f"query: {query.raw!r}")
print("\nper-document similarity:")
for doc, sim in enumerate(table.similarities):
    print(f"  {finder.index.documents[doc].doc_id}: {sim:.4f}")

###############################################################################
# Reciprocal-rank voting: each document votes 1/rank for its authors.
###############################################################################

for method in ("rr", "bayes"):
    ranking = finder.rank(table, FusionConfig(method=method))
    print(f"\n{method} ranking:")
    for position, entry in enumerate(ranking.top(9), start=1):
        record = finder.index.authors[entry.author]
        docs = ", ".join(
            finder.index.documents[d].doc_id for d, _ in entry.contributions
        )
        print(f"  {position}. {record.display_name:<9} score={entry.score:.5f}  ({docs})")

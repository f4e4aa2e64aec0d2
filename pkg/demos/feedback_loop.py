"""Interactive review loop: sequential verdicts and query recomputation.

Candidates are presented one at a time and each must be accepted or
rejected before the next appears. "Recompute" averages the query vector
with the accepted authors' document vectors and re-ranks what's left, so
one good accept steers the rest of the list toward that topic.
"""

from expertfind import ExpertFinder, Tokenizer
from expertfind.corpus import Article
from expertfind.feedback import (
    DECISION_ACCEPT,
    DECISION_REJECT,
    next_candidate,
    open_session,
    recompute,
    record_verdict,
)

# Two topic clusters: p-authors write about alpha, q-authors about gamma.
articles = [
    Article("d1", "alpha alpha", "", ("p1",)),
    Article("d2", "alpha beta", "", ("p2",)),
    Article("d3", "gamma gamma", "", ("q1",)),
    Article("d4", "gamma delta", "", ("q2",)),
]
finder = ExpertFinder.build(articles, tokenizer=Tokenizer(stopwords=frozenset()))

query, rep, table, ranking = finder.search("alpha gamma", "")
session = open_session(query, rep, table, ranking)
print("initial order:", [finder.index.authors[e.author].author_id for e in session.candidates])

###############################################################################
# Judge two candidates: reject the first, accept the second (a gamma author).
###############################################################################

profile = next_candidate(session, finder.index)
print(f"\ncandidate {profile.position}/{profile.total_candidates}: {profile.author_id}")
record_verdict(session, finder.index, profile.author, DECISION_REJECT)

profile = next_candidate(session, finder.index)
print(f"candidate {profile.position}/{profile.total_candidates}: {profile.author_id} -> accept")
record_verdict(session, finder.index, profile.author, DECISION_ACCEPT)

###############################################################################
# Recompute: the accepted author's documents pull the query toward gamma,
# judged authors never reappear, and the cursor restarts.
###############################################################################

recompute(session, finder)
print("\nafter recompute:",
      [finder.index.authors[e.author].author_id for e in session.candidates])
profile = next_candidate(session, finder.index)
print(f"next candidate: {profile.author_id} (the other gamma author)")
for evidence in profile.articles:
    print(f"  evidence: {evidence.article.title!r} at rank {evidence.rank}")

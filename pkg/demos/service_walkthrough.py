"""Walk the HTTP API end to end without opening a network port.

The same app normally runs under `expertfind serve --config ...`; here a
test client drives it in-process: submit a query, judge candidates one by
one, recompute, and read the completion summary.
"""

from fastapi.testclient import TestClient

from expertfind import ExpertFinder
from expertfind.corpus import Article
from expertfind.service import create_app

articles = [
    Article("d1", "Spectral clustering of citation networks",
            "We cluster citation graphs with spectral methods.", ("3", "4", "5")),
    Article("d2", "Expert retrieval with voting models",
            "Voting models aggregate document evidence for expert retrieval.", ("1", "2", "3", "6")),
    Article("d3", "Transport distances for text",
            "Optimal transport compares word distributions.", ("6",)),
]
finder = ExpertFinder.build(articles, names={str(i): f"Author {i}" for i in range(1, 7)})

with TestClient(create_app(finder)) as client:
    print("health:", client.get("/healthz").json())

    body = client.post(
        "/api/query",
        json={"title": "expert retrieval", "abstract": "evidence transport"},
    ).json()
    session = body["session_id"]
    candidate = body["candidate"]
    print(f"\nsession {session}: {body['total_candidates']} candidates")

    ###########################################################################
    # The verdict gate: each candidate must be judged before the next shows.
    ###########################################################################

    verdicts = ["accept", "reject", "reject"]
    for decision in verdicts:
        print(f"candidate {candidate['position']}: {candidate['display_name']} "
              f"(score {candidate['score']:.3f}) -> {decision}")
        response = client.post(
            f"/api/session/{session}/verdict",
            json={"author_id": candidate["author_id"], "decision": decision},
        ).json()
        candidate = response["next"]

    ###########################################################################
    # Recompute re-ranks the remaining authors using the accepted evidence.
    ###########################################################################

    body = client.post(f"/api/session/{session}/recompute").json()
    print(f"\nrecompute #{body['recompute_count']}: "
          f"{body['total_candidates']} candidates left")
    candidate = body["candidate"]
    while candidate is not None:
        response = client.post(
            f"/api/session/{session}/verdict",
            json={"author_id": candidate["author_id"], "decision": "reject"},
        ).json()
        candidate = response["next"]
        if response["complete"]:
            print("summary:", response["summary"])

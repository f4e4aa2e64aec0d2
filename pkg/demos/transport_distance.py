"""Word-level transport distance between two short texts.

Two sentences with no word in common can still be close when their words
live near each other in embedding space: the distance is the minimum cost
of moving one text's word-mass distribution onto the other's, with
Euclidean ground cost between word vectors.
"""

import numpy as np

from expertfind import (
    EmbeddingStore,
    rwmd_lower_bound,
    to_nbow,
    tokenize,
    wcd_lower_bound,
    wmd_exact,
)

# A hand-made embedding neighborhood: two semantic clusters.
vectors = {
    "president": np.array([1.0, 0.1, 0.0]),
    "leader": np.array([0.9, 0.2, 0.1]),
    "speaks": np.array([0.1, 1.0, 0.0]),
    "talks": np.array([0.2, 0.9, 0.1]),
    "press": np.array([0.0, 0.1, 1.0]),
    "media": np.array([0.1, 0.0, 0.9]),
    "banana": np.array([-2.0, -2.0, -2.0]),
}
store = EmbeddingStore(dimension=3, vectors=vectors)

first = to_nbow(tokenize("The president speaks to the media"), store)
second = to_nbow(tokenize("A leader talks with the press"), store)
unrelated = to_nbow(tokenize("banana banana banana"), store)

###############################################################################
# Exact distance and the optimal flow. Row i of the plan says where token i's
# mass goes; row sums equal the source masses, column sums the sink masses.
###############################################################################

distance, plan = wmd_exact(first, second)
print(f"distance(similar sentences) = {distance:.4f}")
print(f"distance(unrelated)         = {wmd_exact(first, unrelated)[0]:.4f}")

print("\noptimal flow:")
for i, token in enumerate(first.tokens):
    for j, other in enumerate(second.tokens):
        if plan.flow[i, j] > 1e-12:
            print(f"  {token:>9} -> {other:<7} mass {plan.flow[i, j]:.3f}")

###############################################################################
# Both pruning bounds never exceed the exact distance; the relaxed bound is
# the tighter of the two.
###############################################################################

print(f"\ncentroid bound = {wcd_lower_bound(first, second):.4f}")
print(f"relaxed bound  = {rwmd_lower_bound(first, second):.4f}")
print(f"exact          = {distance:.4f}")

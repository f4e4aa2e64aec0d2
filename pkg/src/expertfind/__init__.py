"""Expert finding for reviewer recommendation.

Given an article query (title + abstract) and a corpus of authored
articles, rank candidate reviewers by combining query-document similarity
(TF-IDF cosine, or exact optimal-transport distance over word embeddings)
with document-author vote aggregation (reciprocal rank or Bayesian
voting), with an interactive accept/reject feedback loop that re-ranks by
query-vector averaging.
"""

from .artifact import load_artifact, save_artifact
from .corpus import (
    Article,
    AuthorRecord,
    BipartiteIndex,
    build_index,
    docs_of_author,
    load_corpus,
    load_corpus_with_names,
    write_corpus,
)
from .engine import ExpertFinder
from .errors import (
    ConfigError,
    CorpusFormatError,
    DataError,
    DuplicateDocIdError,
    DuplicateVerdictError,
    EmbeddingFormatError,
    EmptyQueryError,
    EmptyRepresentationError,
    ExpertFindError,
    NoCandidatesError,
    NumericError,
    OutOfOrderVerdictError,
    SessionCompleteError,
    SolverError,
)
from .expertrank import (
    ExpertRanking,
    ExpertScore,
    FusionConfig,
    RankedDocuments,
    bayes_vote,
    fuse,
    rank_documents,
    reciprocal_rank_fusion,
    top_k,
)
from .feedback import (
    FeedbackLog,
    ReviewSession,
    VerdictRecord,
    next_candidate,
    open_session,
    recompute,
    record_verdict,
)
from .similarity import (
    NBowRepresentations,
    REGIME_TFIDF,
    REGIME_WMD,
    ScoringConfig,
    SimilarityTable,
    TfidfRepresentations,
    TransportPlan,
    build_representations,
    cosine,
    rwmd_lower_bound,
    score_all_documents,
    wcd_lower_bound,
    wmd_exact,
)
from .textmodel import (
    EmbeddingStore,
    NBowDoc,
    QueryText,
    SparseVector,
    TfidfModel,
    Tokenizer,
    build_query,
    fit_tfidf,
    load_embeddings,
    load_stopwords,
    to_nbow,
    tokenize,
    vectorize_tfidf,
)
from .transport import solve_transport

__version__ = "0.1.0"

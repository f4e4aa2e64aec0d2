// Wire types mirroring the JSON bodies of the HTTP API.

export interface ArticleView {
  title: string;
  abstract: string;
  authors: string[];
  affiliations: string[];
  date: string | null;
  rank: number;
  similarity: number;
}

export interface Candidate {
  author_id: string;
  display_name: string;
  position: number;
  total_candidates: number;
  score: number;
  articles: ArticleView[];
}

export interface QueryResponse {
  session_id: string;
  total_candidates: number;
  candidate: Candidate;
}

export interface Summary {
  accepted: string[];
  rejected: string[];
  recompute_count: number;
}

export interface VerdictResponse {
  next: Candidate | null;
  complete: boolean;
  summary?: Summary;
}

export interface RecomputeResponse {
  session_id: string;
  total_candidates: number;
  recompute_count: number;
  candidate: Candidate | null;
  complete: boolean;
  summary: Summary | null;
}

export interface Health {
  status: string;
  index_docs: number;
  index_authors: number;
  regime: string;
}

export type Decision = "accept" | "reject";

export interface Api {
  submitQuery(title: string, abstract: string): Promise<QueryResponse>;
  currentCandidate(sessionId: string): Promise<Candidate>;
  postVerdict(sessionId: string, authorId: string, decision: Decision): Promise<VerdictResponse>;
  recompute(sessionId: string): Promise<RecomputeResponse>;
}

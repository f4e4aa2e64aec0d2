import {
  Api,
  Candidate,
  Decision,
  QueryResponse,
  RecomputeResponse,
  VerdictResponse,
} from "./types.js";

// Error bodies from the service are always {code, message}.
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const code = body && typeof body.code === "string" ? body.code : "unknown_error";
    const message = body && typeof body.message === "string" ? body.message : response.statusText;
    throw new ApiError(response.status, code, message);
  }
  return body as T;
}

export class HttpApi implements Api {
  constructor(private readonly baseUrl: string = "") {}

  submitQuery(title: string, abstract: string): Promise<QueryResponse> {
    return request(`${this.baseUrl}/api/query`, {
      method: "POST",
      body: JSON.stringify({ title, abstract }),
    });
  }

  currentCandidate(sessionId: string): Promise<Candidate> {
    return request(`${this.baseUrl}/api/session/${encodeURIComponent(sessionId)}/candidate`);
  }

  postVerdict(sessionId: string, authorId: string, decision: Decision): Promise<VerdictResponse> {
    return request(`${this.baseUrl}/api/session/${encodeURIComponent(sessionId)}/verdict`, {
      method: "POST",
      body: JSON.stringify({ author_id: authorId, decision }),
    });
  }

  recompute(sessionId: string): Promise<RecomputeResponse> {
    return request(`${this.baseUrl}/api/session/${encodeURIComponent(sessionId)}/recompute`, {
      method: "POST",
    });
  }
}

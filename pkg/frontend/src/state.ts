import { ApiError } from "./api.js";
import { Api, Candidate, Decision, Summary } from "./types.js";

export type Phase = "form" | "review" | "complete";

export interface AppError {
  code: string;
  message: string;
  retry: (() => Promise<void>) | null;
}

export interface AppState {
  phase: Phase;
  sessionId: string | null;
  candidate: Candidate | null;
  totalCandidates: number;
  recomputeCount: number;
  summary: Summary | null;
  busy: boolean;
  error: AppError | null;
}

export const initialState: AppState = {
  phase: "form",
  sessionId: null,
  candidate: null,
  totalCandidates: 0,
  recomputeCount: 0,
  summary: null,
  busy: false,
  error: null,
};

/**
 * Session flow with the verdict gate built in: there is no "advance"
 * operation at all — the only way to reach candidate n+1 is a verdict on
 * candidate n (or a recompute, which restarts the remaining sequence).
 * All scoring lives server-side; this class only holds presentation state.
 */
export class ReviewFlow {
  state: AppState = { ...initialState };

  constructor(
    private readonly api: Api,
    private readonly onChange: (state: AppState) => void,
  ) {}

  private emit(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.state);
  }

  private toError(error: unknown, retry: (() => Promise<void>) | null): AppError {
    if (error instanceof ApiError) {
      return {
        code: error.code,
        message: error.message,
        retry: error.status === 503 ? retry : null,
      };
    }
    return {
      code: "network_error",
      message: error instanceof Error ? error.message : String(error),
      retry,
    };
  }

  async submitQuery(title: string, abstract: string): Promise<void> {
    if (this.state.busy || (title.trim() === "" && abstract.trim() === "")) {
      return;
    }
    this.emit({ busy: true, error: null });
    try {
      const response = await this.api.submitQuery(title, abstract);
      this.emit({
        phase: "review",
        sessionId: response.session_id,
        candidate: response.candidate,
        totalCandidates: response.total_candidates,
        recomputeCount: 0,
        summary: null,
        busy: false,
      });
    } catch (error) {
      // stays on the form; empty_query and friends render inline
      this.emit({ busy: false, error: this.toError(error, () => this.submitQuery(title, abstract)) });
    }
  }

  /** Re-fetch the current candidate (page reload, or corrective 409 path). */
  async resume(sessionId: string): Promise<void> {
    this.emit({ busy: true, error: null });
    try {
      const candidate = await this.api.currentCandidate(sessionId);
      this.emit({
        phase: "review",
        sessionId,
        candidate,
        totalCandidates: candidate.total_candidates,
        busy: false,
      });
    } catch (error) {
      if (error instanceof ApiError && error.status === 410) {
        this.emit({ phase: "complete", sessionId, candidate: null, busy: false });
        return;
      }
      this.emit({ busy: false, error: this.toError(error, () => this.resume(sessionId)) });
    }
  }

  async verdict(decision: Decision): Promise<void> {
    const { sessionId, candidate } = this.state;
    if (this.state.busy || this.state.phase !== "review" || !sessionId || !candidate) {
      return;
    }
    this.emit({ busy: true, error: null });
    try {
      const response = await this.api.postVerdict(sessionId, candidate.author_id, decision);
      if (response.complete || response.next === null) {
        this.emit({ phase: "complete", candidate: null, summary: response.summary ?? null, busy: false });
      } else {
        this.emit({ candidate: response.next, busy: false });
      }
    } catch (error) {
      if (error instanceof ApiError && (error.status === 409 || error.status === 410)) {
        // out of sync with the server: re-fetch the authoritative state
        this.emit({ busy: false });
        await this.resume(sessionId);
        return;
      }
      this.emit({ busy: false, error: this.toError(error, () => this.verdict(decision)) });
    }
  }

  async recompute(): Promise<void> {
    const { sessionId } = this.state;
    if (this.state.busy || this.state.phase !== "review" || !sessionId) {
      return; // busy guard: a double click sends a single request
    }
    this.emit({ busy: true, error: null });
    try {
      const response = await this.api.recompute(sessionId);
      if (response.complete || response.candidate === null) {
        this.emit({
          phase: "complete",
          candidate: null,
          summary: response.summary,
          recomputeCount: response.recompute_count,
          busy: false,
        });
      } else {
        this.emit({
          candidate: response.candidate,
          totalCandidates: response.total_candidates,
          recomputeCount: response.recompute_count,
          busy: false,
        });
      }
    } catch (error) {
      this.emit({ busy: false, error: this.toError(error, () => this.recompute()) });
    }
  }
}

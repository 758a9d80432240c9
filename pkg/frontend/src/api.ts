import type { ProblemBody, ProblemSummary, SessionView, TreeInfo } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`API error ${status}: ${JSON.stringify(detail)}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client for the consultation service. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    let body: unknown = null;
    const text = await response.text();
    if (text) {
      try {
        body = JSON.parse(text);
      } catch {
        body = text;
      }
    }
    if (!response.ok) {
      throw new ApiError(response.status, body);
    }
    return body as T;
  }

  createProblem(body: ProblemBody): Promise<{ id: string; warnings: string[] }> {
    return this.request("/api/problems", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listProblems(): Promise<{ problems: ProblemSummary[] }> {
    return this.request("/api/problems");
  }

  getProblem(id: string): Promise<ProblemBody> {
    return this.request(`/api/problems/${encodeURIComponent(id)}`);
  }

  startSession(problemId: string, strategy: string, mode: string): Promise<SessionView> {
    return this.request("/api/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ problem_id: problemId, strategy, mode }),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request(`/api/sessions/${encodeURIComponent(id)}`);
  }

  answer(sessionId: string, column: number, value: boolean): Promise<SessionView> {
    return this.request(`/api/sessions/${encodeURIComponent(sessionId)}/answers`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ column, value }),
    });
  }

  strategyTree(problemId: string, method: string): Promise<TreeInfo> {
    return this.request(
      `/api/problems/${encodeURIComponent(problemId)}/tree?method=${encodeURIComponent(method)}`,
    );
  }
}

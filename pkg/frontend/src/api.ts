import type {
  CatalogDoc,
  FinishResponse,
  HistogramPayload,
  ProgressionRow,
  ReportPayload,
  ScoresResponse,
  SessionDetail,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "internal";
      let message = `${method} ${path} failed with ${response.status}`;
      let details: unknown;
      try {
        const parsed = await response.json();
        if (parsed?.error) {
          code = parsed.error.code ?? code;
          message = parsed.error.message ?? message;
          details = parsed.error.details;
        }
      } catch {
        // non-JSON error body; keep the fallback message
      }
      throw new ApiError(response.status, code, message, details);
    }
    return (await response.json()) as T;
  }

  getCatalog(): Promise<CatalogDoc> {
    return this.request("GET", "/api/catalog");
  }

  listSessions(): Promise<{ sessions: SessionSummary[] }> {
    return this.request("GET", "/api/sessions");
  }

  createSession(user: string): Promise<SessionSummary> {
    return this.request("POST", "/api/sessions", { user });
  }

  getSession(sessionId: string): Promise<SessionDetail> {
    return this.request("GET", `/api/sessions/${sessionId}`);
  }

  putScores(
    sessionId: string,
    scores: Record<string, number>,
  ): Promise<ScoresResponse> {
    return this.request("PUT", `/api/sessions/${sessionId}/scores`, scores);
  }

  deleteScore(sessionId: string, leafId: string): Promise<ScoresResponse> {
    return this.request("DELETE", `/api/sessions/${sessionId}/scores/${leafId}`);
  }

  finishExperiment(sessionId: string, partial: boolean): Promise<FinishResponse> {
    return this.request("POST", `/api/sessions/${sessionId}/finish`, { partial });
  }

  getLiveReport(sessionId: string): Promise<ReportPayload> {
    return this.request("GET", `/api/sessions/${sessionId}/report`);
  }

  getExperimentReport(sessionId: string, index: number): Promise<ReportPayload> {
    return this.request("GET", `/api/sessions/${sessionId}/report?experiment=${index}`);
  }

  getProgression(sessionId: string): Promise<{ rows: ProgressionRow[] }> {
    return this.request("GET", `/api/sessions/${sessionId}/progression`);
  }

  getHistogram(
    sessionId: string,
    level: "domain" | "control",
    experiment?: number,
  ): Promise<HistogramPayload> {
    const suffix = experiment === undefined ? "" : `&experiment=${experiment}`;
    return this.request(
      "GET",
      `/api/sessions/${sessionId}/histogram?level=${level}${suffix}`,
    );
  }
}

// Typed client for the engine's REST API. All semantic computation happens
// server-side; this module only moves documents.

import type {
  HistoryRow,
  JobState,
  MutationResponse,
  RelationEdge,
  RelationGraph,
  SessionSnapshot,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = (input, init) => fetch(input, init)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "HTTP_" + response.status;
      let message = response.statusText;
      try {
        const doc = await response.json();
        if (doc?.error) {
          code = doc.error.code ?? code;
          message = doc.error.message ?? message;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  createSession(name: string): Promise<{ id: string }> {
    return this.request("POST", "/sessions", { name });
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request("GET", `/sessions/${id}`);
  }

  patchSemantics(id: string, path: string, text: string | null): Promise<MutationResponse> {
    return this.request("PATCH", `/sessions/${id}/semantics`, { path, text });
  }

  startParse(id: string, text: string): Promise<{ job_id: string }> {
    return this.request("POST", `/sessions/${id}/parse`, { text });
  }

  startGenerate(id: string): Promise<{ job_id: string }> {
    return this.request("POST", `/sessions/${id}/generate`, {});
  }

  startAnalyze(id: string, screenshotBase64?: string): Promise<{ job_id: string }> {
    const body = screenshotBase64 ? { screenshot_base64: screenshotBase64 } : {};
    return this.request("POST", `/sessions/${id}/analyze`, body);
  }

  startRelations(id: string): Promise<{ job_id: string }> {
    return this.request("POST", `/sessions/${id}/relations`, {});
  }

  acceptEdge(id: string, edge: RelationEdge): Promise<MutationResponse> {
    return this.request("POST", `/sessions/${id}/accept`, { edge });
  }

  rollback(id: string, version: number): Promise<MutationResponse> {
    return this.request("POST", `/sessions/${id}/rollback`, { version });
  }

  history(id: string): Promise<{ rows: HistoryRow[] }> {
    return this.request("GET", `/sessions/${id}/history`);
  }

  async currentGraph(id: string): Promise<RelationGraph | null> {
    try {
      return await this.request("GET", `/sessions/${id}/graph/current`);
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) return null;
      throw error;
    }
  }

  async currentArtifact(id: string): Promise<string | null> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions/${id}/artifact/current`, {
      method: "GET",
    });
    if (response.status === 404) return null;
    if (!response.ok) {
      throw new ApiError(response.status, "HTTP_" + response.status, response.statusText);
    }
    return response.text();
  }

  getJob(jobId: string): Promise<JobState> {
    return this.request("GET", `/jobs/${jobId}`);
  }

  async waitForJob(
    jobId: string,
    options: { intervalMs?: number; timeoutMs?: number; sleep?: (ms: number) => Promise<void> } = {},
  ): Promise<JobState> {
    const intervalMs = options.intervalMs ?? 250;
    const timeoutMs = options.timeoutMs ?? 180_000;
    const sleep = options.sleep ?? ((ms) => new Promise((resolve) => setTimeout(resolve, ms)));
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const job = await this.getJob(jobId);
      if (job.status !== "pending") return job;
      if (Date.now() > deadline) {
        throw new ApiError(408, "JOB_TIMEOUT", `job ${jobId} still pending after ${timeoutMs}ms`);
      }
      await sleep(intervalMs);
    }
  }
}

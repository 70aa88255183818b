/** Thin typed client over the HTTP service. All numbers displayed anywhere
 * in the UI originate from these responses; the client never computes. */

import type {
  DeckPayload,
  Report,
  RunHandle,
  RunRequest,
  SimosResponse,
  ValidationDetail,
  WhatIfRequest,
  WhatIfResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ValidationDetail | string,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload.detail ?? payload);
    }
    return payload as T;
  }

  createProject(document: unknown, id?: string): Promise<{ project_id: string }> {
    const query = id ? `?id=${encodeURIComponent(id)}` : "";
    return this.request("POST", `/projects${query}`, document);
  }

  getProject(projectId: string): Promise<unknown> {
    return this.request("GET", `/projects/${projectId}`);
  }

  startRun(projectId: string, body: RunRequest): Promise<RunHandle> {
    return this.request("POST", `/projects/${projectId}/runs`, body);
  }

  getRun(runId: string): Promise<RunHandle> {
    return this.request("GET", `/runs/${runId}`);
  }

  async pollRun(runId: string, intervalMs = 150, timeoutMs = 60_000): Promise<Report> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const handle = await this.getRun(runId);
      if (handle.status === "done" && handle.report) return handle.report;
      if (handle.status === "failed") throw new ApiError(500, handle.error ?? "run failed");
      if (Date.now() > deadline) throw new ApiError(408, "run polling timed out");
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }

  whatif(projectId: string, body: WhatIfRequest): Promise<WhatIfResponse> {
    return this.request("POST", `/projects/${projectId}/whatif`, body);
  }

  simosWeights(deck: DeckPayload): Promise<SimosResponse> {
    return this.request("POST", "/weights/simos", deck);
  }
}

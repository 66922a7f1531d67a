/** Typed fetch client for the gridlock service.
 *
 * Every non-2xx response carries the uniform envelope
 * `{"error": {"code", "message"}}`; it is rethrown as ApiError so callers
 * can branch on `code` (LOCKED, SESSION_STATE, ...) instead of parsing text.
 */

import {
  BootstrapRequest,
  BootstrapStatus,
  Consequence,
  ErrorEnvelope,
  FaceIndex,
  Move,
  MoveResponse,
  SessionInfo,
  SubmitOutcome,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class GridlockClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = "UNKNOWN";
      let message = `${method} ${path} failed with HTTP ${response.status}`;
      try {
        const envelope = (await response.json()) as ErrorEnvelope;
        code = envelope.error.code;
        message = envelope.error.message;
      } catch {
        // non-JSON error body; keep the generic message
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string; consequences: Consequence[] }> {
    return this.request("GET", "/healthz");
  }

  createAccount(): Promise<{ account_id: string }> {
    return this.request("POST", "/accounts");
  }

  register(
    accountId: string,
    imageIds: string[],
    secret: string[]
  ): Promise<{ account_id: string; registered: boolean }> {
    return this.request("POST", `/accounts/${accountId}/registration`, {
      image_ids: imageIds,
      secret,
    });
  }

  startBootstrap(accountId: string, request: BootstrapRequest): Promise<{ job_id: string }> {
    return this.request("POST", `/accounts/${accountId}/bootstrap`, request);
  }

  bootstrapStatus(accountId: string, jobId: string): Promise<BootstrapStatus> {
    return this.request("GET", `/accounts/${accountId}/bootstrap/${jobId}`);
  }

  faceIndex(accountId: string): Promise<FaceIndex> {
    return this.request("GET", `/accounts/${accountId}/faces`);
  }

  /** URL of the PNG crop for one face; usable directly as an <img> src. */
  faceUrl(accountId: string, imageId: string): string {
    return `${this.baseUrl}/accounts/${accountId}/faces/${imageId}.png`;
  }

  openSession(accountId: string, consequence: Consequence, seed?: number): Promise<SessionInfo> {
    return this.request("POST", `/accounts/${accountId}/sessions`, {
      consequence,
      ...(seed === undefined ? {} : { seed }),
    });
  }

  postMove(sessionId: string, move: Move): Promise<MoveResponse> {
    return this.request("POST", `/sessions/${sessionId}/moves`, move);
  }

  submit(sessionId: string): Promise<SubmitOutcome> {
    return this.request("POST", `/sessions/${sessionId}/submit`);
  }

  resource(
    resourceId: string,
    sessionId: string
  ): Promise<{ resource_id: string; title: string; consequence: Consequence; content: string }> {
    return this.request("GET", `/resources/${resourceId}?session=${encodeURIComponent(sessionId)}`);
  }
}

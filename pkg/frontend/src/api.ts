// Thin fetch client for the session gateway.

import type {
  ActionResponse,
  CreateSessionResponse,
  ResultResponse,
  SessionRequest,
  TicketResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(response.status, body.detail ?? response.statusText);
  }
  return body as T;
}

export class GameClient {
  constructor(private baseUrl: string = "") {}

  createSession(req: SessionRequest): Promise<CreateSessionResponse> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  submitAction(sessionId: string, action: number | null): Promise<ActionResponse> {
    return request(`${this.baseUrl}/sessions/${sessionId}/action`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ action }),
    });
  }

  ticket(sessionId: string): Promise<TicketResponse> {
    return request(`${this.baseUrl}/sessions/${sessionId}`);
  }

  result(sessionId: string): Promise<ResultResponse> {
    return request(`${this.baseUrl}/sessions/${sessionId}/result`);
  }
}

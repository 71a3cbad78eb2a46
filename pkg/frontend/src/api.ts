/** Thin fetch client for the tutoring service; one method per endpoint. */

import type { HintPayload, ServiceError, SessionPayload } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    detail: string,
  ) {
    super(detail);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const err = body as ServiceError;
    throw new ApiError(response.status, err.error ?? "HttpError", err.detail ?? response.statusText);
  }
  return body as T;
}

export interface TutorApi {
  createSession(teacher: Blob, student: Blob, description?: string): Promise<SessionPayload>;
  getHint(sessionId: string): Promise<HintPayload>;
  applyFix(sessionId: string, hintId: string): Promise<SessionPayload>;
  submitRevision(sessionId: string, container: Blob): Promise<SessionPayload>;
  chat(sessionId: string, question: string): Promise<{ reply: string }>;
  getReport(sessionId: string): Promise<SessionPayload>;
}

export class ApiClient implements TutorApi {
  constructor(private baseUrl: string) {}

  async createSession(teacher: Blob, student: Blob, description?: string): Promise<SessionPayload> {
    const form = new FormData();
    form.append("teacher", teacher, "teacher.sb3");
    form.append("student", student, "student.sb3");
    if (description) form.append("description", description);
    return unwrap(await fetch(`${this.baseUrl}/sessions`, { method: "POST", body: form }));
  }

  async getHint(sessionId: string): Promise<HintPayload> {
    return unwrap(await fetch(`${this.baseUrl}/sessions/${sessionId}/hint`));
  }

  async applyFix(sessionId: string, hintId: string): Promise<SessionPayload> {
    return unwrap(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/apply`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ hintId }),
      }),
    );
  }

  async submitRevision(sessionId: string, container: Blob): Promise<SessionPayload> {
    return unwrap(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/project`, {
        method: "PUT",
        headers: { "content-type": "application/octet-stream" },
        body: container,
      }),
    );
  }

  async chat(sessionId: string, question: string): Promise<{ reply: string }> {
    return unwrap(
      await fetch(`${this.baseUrl}/sessions/${sessionId}/chat`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ question }),
      }),
    );
  }

  async getReport(sessionId: string): Promise<SessionPayload> {
    return unwrap(await fetch(`${this.baseUrl}/sessions/${sessionId}/report`));
  }
}

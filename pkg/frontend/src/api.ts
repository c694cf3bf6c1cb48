/** Thin typed client over the session API; every mutation returns a snapshot. */

import type {
  ApiErrorBody, DiagramDocument, LotteryView, Snapshot, Solution,
} from "./types.js";

export class ApiError extends Error {
  code: string;
  violations: { code: string; message: string }[];

  constructor(code: string, message: string, violations: { code: string; message: string }[] = []) {
    super(message);
    this.code = code;
    this.violations = violations;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await response.json();
  if (!response.ok) {
    const err = (body as ApiErrorBody).error ?? { code: "UNKNOWN" };
    throw new ApiError(err.code, err.message ?? `request failed (${response.status})`,
      err.violations ?? []);
  }
  return body as T;
}

export class SessionClient {
  base: string;
  sessionId = "";

  constructor(base = "") {
    this.base = base;
  }

  private url(rest: string): string {
    return `${this.base}/api/sessions/${this.sessionId}${rest}`;
  }

  async create(document: DiagramDocument): Promise<Snapshot> {
    const snap = await request<Snapshot>(`${this.base}/api/sessions`, {
      method: "POST",
      body: JSON.stringify({ document }),
    });
    this.sessionId = snap.session_id;
    return snap;
  }

  refetch(): Promise<Snapshot> {
    return request<Snapshot>(this.url(""));
  }

  document(): Promise<DiagramDocument> {
    return request<DiagramDocument>(this.url("/document"));
  }

  edit(payload: Record<string, unknown>): Promise<Snapshot> {
    return request<Snapshot>(this.url("/edits"), { method: "POST", body: JSON.stringify(payload) });
  }

  transform(payload: Record<string, unknown>): Promise<Snapshot> {
    return request<Snapshot>(this.url("/transforms"), { method: "POST", body: JSON.stringify(payload) });
  }

  solve(): Promise<Solution> {
    return request<Solution>(this.url("/solve"), { method: "POST", body: "{}" });
  }

  lottery(payload: Record<string, unknown> = {}): Promise<LotteryView> {
    return request<LotteryView>(this.url("/lottery"), { method: "POST", body: JSON.stringify(payload) });
  }

  async valueOfInformation(from: string, to: string): Promise<number> {
    const body = await request<{ value_of_information: number }>(this.url("/voi"), {
      method: "POST",
      body: JSON.stringify({ from, to }),
    });
    return body.value_of_information;
  }

  undo(): Promise<Snapshot> {
    return request<Snapshot>(this.url("/undo"), { method: "POST", body: "{}" });
  }

  redo(): Promise<Snapshot> {
    return request<Snapshot>(this.url("/redo"), { method: "POST", body: "{}" });
  }
}

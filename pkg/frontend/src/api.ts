/** Typed client for the icecluster HTTP service; the only backend surface. */

import type {
  ApiErrorBody,
  MutateResponse,
  SessionSnapshot,
  TermJson,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly witness: unknown;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.witness = body.witness;
  }
}

async function parse<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body as ApiErrorBody);
  }
  return body as T;
}

export class Client {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async createSession(
    quiver: unknown,
    potential?: unknown,
  ): Promise<{ id: string }> {
    const response = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ quiver, potential }),
    });
    return parse(response);
  }

  async getSession(id: string): Promise<SessionSnapshot> {
    return parse(await fetch(this.url(`/sessions/${id}`)));
  }

  async mutate(
    id: string,
    vertex: number,
    role?: "plus" | "minus",
  ): Promise<MutateResponse> {
    const body: Record<string, unknown> = { vertex };
    if (role) {
      body.role = role;
    }
    const response = await fetch(this.url(`/sessions/${id}/mutate`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return parse(response);
  }

  async undo(id: string): Promise<{ session: SessionSnapshot }> {
    const response = await fetch(this.url(`/sessions/${id}/undo`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: "{}",
    });
    return parse(response);
  }

  async variables(
    id: string,
    depth: number,
  ): Promise<{ variables: TermJson[][]; pretty: string[]; stabilized: boolean }> {
    return parse(
      await fetch(this.url(`/sessions/${id}/variables?depth=${depth}`)),
    );
  }
}

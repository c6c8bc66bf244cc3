// Thin fetch client for the play service. All game logic stays server-side;
// this module only moves JSON (and replay text) back and forth.

import type { CreateGameRequest, Hint, Snapshot } from "./types.js";

export class ServiceError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

async function unwrap<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "HTTP_" + response.status;
  let message = response.statusText;
  try {
    const body = (await response.json()) as { error?: { code: string; message: string } };
    if (body.error) {
      code = body.error.code;
      message = body.error.message;
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ServiceError(code, message, response.status);
}

export class GameClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = fetch,
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async createGame(request: CreateGameRequest): Promise<{ id: string; snapshot: Snapshot }> {
    const response = await this.fetchImpl(this.url("/games"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    return unwrap(response);
  }

  async getSnapshot(id: string): Promise<Snapshot> {
    return unwrap(await this.fetchImpl(this.url(`/games/${id}`)));
  }

  async postMove(id: string, district: number, color: string): Promise<Snapshot> {
    const response = await this.fetchImpl(this.url(`/games/${id}/moves`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ district, color }),
    });
    return unwrap(response);
  }

  async getHint(id: string): Promise<Hint> {
    return unwrap(await this.fetchImpl(this.url(`/games/${id}/hint`)));
  }

  async getReplay(id: string): Promise<string> {
    const response = await this.fetchImpl(this.url(`/games/${id}/replay`));
    if (!response.ok) {
      await unwrap(response); // throws
    }
    return response.text();
  }
}

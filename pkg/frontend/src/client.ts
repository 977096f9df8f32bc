import type {
  AnnotatedMove,
  ComponentResult,
  CreateSessionBody,
  MoveJson,
  SessionState,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parse<T>(res: Response): Promise<T> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    const detail =
      typeof body === "object" && body !== null && "detail" in body
        ? String((body as { detail: unknown }).detail)
        : res.statusText;
    throw new ApiError(res.status, detail);
  }
  return body as T;
}

/** Thin typed wrapper over the session endpoints; no legality logic here. */
export class SolitaireClient {
  constructor(private baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(body: CreateSessionBody): Promise<SessionState> {
    const res = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return parse(res);
  }

  async getState(id: string): Promise<SessionState> {
    return parse(await fetch(this.url(`/sessions/${id}`)));
  }

  async listMoves(id: string): Promise<AnnotatedMove[]> {
    const data = await parse<{ moves: AnnotatedMove[] }>(
      await fetch(this.url(`/sessions/${id}/moves`)),
    );
    return data.moves;
  }

  async applyMove(id: string, move: MoveJson): Promise<SessionState> {
    const res = await fetch(this.url(`/sessions/${id}/moves`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ g: move.g, a: move.a, b: move.b }),
    });
    return parse(res);
  }

  async undo(id: string): Promise<SessionState> {
    const res = await fetch(this.url(`/sessions/${id}/undo`), {
      method: "POST",
    });
    return parse(res);
  }

  async independence(id: string, budget?: number): Promise<boolean> {
    const query = budget === undefined ? "" : `?budget=${budget}`;
    const data = await parse<{ independent: boolean }>(
      await fetch(this.url(`/sessions/${id}/independence${query}`)),
    );
    return data.independent;
  }

  async componentSync(id: string, limit?: number): Promise<ComponentResult> {
    const query = limit === undefined ? "" : `&limit=${limit}`;
    return parse(
      await fetch(this.url(`/sessions/${id}/component?wait=1${query}`)),
    );
  }

  async componentJob(id: string, limit?: number): Promise<string> {
    const query = limit === undefined ? "" : `&limit=${limit}`;
    const data = await parse<{ job: string }>(
      await fetch(this.url(`/sessions/${id}/component?wait=0${query}`)),
    );
    return data.job;
  }

  async pollJob(
    id: string,
    job: string,
    intervalMs = 100,
    attempts = 200,
  ): Promise<ComponentResult> {
    for (let i = 0; i < attempts; i++) {
      const status = await parse<{ done: boolean; result?: ComponentResult }>(
        await fetch(this.url(`/sessions/${id}/jobs/${job}`)),
      );
      if (status.done && status.result) return status.result;
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
    throw new Error(`component job ${job} did not finish`);
  }
}

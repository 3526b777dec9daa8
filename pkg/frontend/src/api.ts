import { ApiError, NeighborhoodView, SessionView } from "./types.js";

export class ApiRequestError extends Error {
  constructor(public status: number, public body: ApiError) {
    super(`${status}: ${body.error}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client; the UI consumes these payloads verbatim. */
export class ApiClient {
  constructor(private base: string, private fetchImpl: FetchLike = fetch) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiRequestError(resp.status, body as ApiError);
    }
    return body as T;
  }

  session(): Promise<SessionView> {
    return this.request<SessionView>("/session");
  }

  mutate(vertex: number, version?: number): Promise<SessionView> {
    const payload: Record<string, unknown> = { vertex };
    if (version !== undefined) payload.version = version;
    return this.request<SessionView>("/mutate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  undo(): Promise<SessionView> {
    return this.request<SessionView>("/undo", { method: "POST", body: "{}" });
  }

  reset(seed?: unknown): Promise<SessionView> {
    return this.request<SessionView>("/reset", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(seed === undefined ? {} : { seed }),
    });
  }

  neighborhood(depth: number): Promise<NeighborhoodView> {
    return this.request<NeighborhoodView>(`/neighborhood?depth=${depth}`);
  }
}

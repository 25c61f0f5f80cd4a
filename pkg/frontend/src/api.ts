// Thin typed client for the grounding service.  The console does no
// grounding work of its own; everything it shows comes out of these
// responses unchanged.

import type { GraphDoc, GroundResponse, ParseFailureDetail, SceneEntry } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export function isParseFailure(err: unknown): err is ApiError & { detail: ParseFailureDetail } {
  return (
    err instanceof ApiError &&
    err.status === 422 &&
    typeof err.detail === "object" &&
    err.detail !== null &&
    (err.detail as { error?: string }).error === "parse"
  );
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, null, `service unreachable at ${this.baseUrl} (${err})`);
    }
    const body = await res.json().catch(() => null);
    if (!res.ok) {
      const detail =
        body !== null && typeof body === "object" && "detail" in body
          ? (body as { detail: unknown }).detail
          : body;
      const gloss = typeof detail === "string" ? detail : JSON.stringify(detail);
      throw new ApiError(res.status, detail, `${res.status} from ${path}: ${gloss}`);
    }
    return body as T;
  }

  async scenes(): Promise<SceneEntry[]> {
    const body = await this.request<{ scenes: SceneEntry[] }>("/scenes");
    return body.scenes;
  }

  graph(sceneId: string, regionId: string): Promise<GraphDoc> {
    return this.request<GraphDoc>(
      `/scenes/${encodeURIComponent(sceneId)}/regions/${encodeURIComponent(regionId)}/graph`,
    );
  }

  ground(sceneId: string, regionId: string, statement: string): Promise<GroundResponse> {
    return this.request<GroundResponse>("/ground", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ scene_id: sceneId, region_id: regionId, statement }),
    });
  }
}

/**
 * Typed client for the advisory service's /api/v1 routes.
 *
 * Every non-2xx response carries `{"error": {"code", "message",
 * "details"}}` with a code from a closed vocabulary; that surfaces here
 * as ApiError. A fetch that never reaches the server (connection
 * refused, DNS, airplane mode) surfaces as NetworkError, which the map
 * screens translate into the offline banner.
 */

import type {
  ApSummary,
  Bbox,
  Cluster,
  LeaderboardRow,
  OwnershipRow,
  ReviewRequest,
  RewardEvent,
} from "./types.js";
import { bboxToWire } from "./types.js";

export type ErrorCode =
  | "validation_failed"
  | "malformed_body"
  | "invalid_bbox"
  | "unsupported_version"
  | "unknown_user"
  | "unknown_ap"
  | "duplicate_user"
  | "stale_timestamp"
  | "internal";

export class ApiError extends Error {
  readonly code: ErrorCode;
  readonly status: number;
  readonly details: unknown;

  constructor(code: ErrorCode, message: string, status: number, details: unknown = null) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
    this.details = details;
  }
}

export class NetworkError extends Error {
  constructor(cause: unknown) {
    super("could not reach the server");
    this.name = "NetworkError";
    this.cause = cause;
  }
}

export interface RegisterRequest {
  user_id: string;
  display_name: string;
  avatar_ref?: string;
  at?: number;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    // bind so a bare globalThis.fetch keeps its receiver
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  async register(body: RegisterRequest): Promise<RewardEvent> {
    return (await this.requestJson("POST", "/api/v1/users", body)) as RewardEvent;
  }

  async submitReview(body: ReviewRequest): Promise<RewardEvent> {
    return (await this.requestJson("POST", "/api/v1/reviews", body)) as RewardEvent;
  }

  async listAps(bbox: Bbox, minRating?: number): Promise<ApSummary[]> {
    const params = new URLSearchParams({ bbox: bboxToWire(bbox) });
    if (minRating !== undefined) params.set("min_rating", String(minRating));
    return (await this.requestJson("GET", `/api/v1/aps?${params}`)) as ApSummary[];
  }

  async clusters(bbox: Bbox, zoom: number): Promise<Cluster[]> {
    const params = new URLSearchParams({ bbox: bboxToWire(bbox), zoom: String(zoom) });
    return (await this.requestJson("GET", `/api/v1/clusters?${params}`)) as Cluster[];
  }

  async leaderboard(n?: number): Promise<LeaderboardRow[]> {
    const suffix = n === undefined ? "" : `?n=${n}`;
    return (await this.requestJson("GET", `/api/v1/leaderboard${suffix}`)) as LeaderboardRow[];
  }

  async ownership(bbox: Bbox): Promise<OwnershipRow[]> {
    const params = new URLSearchParams({ bbox: bboxToWire(bbox) });
    return (await this.requestJson("GET", `/api/v1/ownership?${params}`)) as OwnershipRow[];
  }

  /** Raw snapshot bytes for offline search; optional bbox narrows the export. */
  async downloadSnapshot(bbox?: Bbox): Promise<Uint8Array> {
    const suffix = bbox === undefined ? "" : `?bbox=${encodeURIComponent(bboxToWire(bbox))}`;
    const resp = await this.send("GET", `/api/v1/snapshot${suffix}`);
    if (!resp.ok) throw await this.toApiError(resp);
    return new Uint8Array(await resp.arrayBuffer());
  }

  private async send(method: string, path: string, body?: unknown): Promise<Response> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    try {
      return await this.fetchFn(this.base + path, init);
    } catch (exc) {
      throw new NetworkError(exc);
    }
  }

  private async requestJson(method: string, path: string, body?: unknown): Promise<unknown> {
    const resp = await this.send(method, path, body);
    if (!resp.ok) throw await this.toApiError(resp);
    return resp.json();
  }

  private async toApiError(resp: Response): Promise<ApiError> {
    let code: ErrorCode = "internal";
    let message = `unexpected response (HTTP ${resp.status})`;
    let details: unknown = null;
    try {
      const payload = (await resp.json()) as { error?: { code?: string; message?: string; details?: unknown } };
      if (payload.error?.code) {
        code = payload.error.code as ErrorCode;
        message = payload.error.message ?? message;
        details = payload.error.details ?? null;
      }
    } catch {
      // non-JSON error body; keep the generic message
    }
    return new ApiError(code, message, resp.status, details);
  }
}

/**
 * Thin client over the /api endpoints.
 *
 * The transport is injectable so tests can intercept every request; the
 * invariant that every displayed number came over the wire is enforced by
 * this being the only module that produces response objects.
 */

import type {
  ApiErrorBody,
  CrossingResponse,
  EvaluateResponse,
  SweepResponse,
} from "./types.js";

export interface TransportResponse {
  status: number;
  body: string;
}

export type Transport = (path: string, init?: { method?: string; body?: string }) => Promise<TransportResponse>;

/** Server-reported failure (4xx/5xx with a structured error body). */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly field?: string;
  constructor(status: number, code: string, message: string, field?: string) {
    super(message || code);
    this.status = status;
    this.code = code;
    if (field !== undefined) this.field = field;
  }
}

/** Transport-level failure: nothing reached the server, or no JSON came back. */
export class ConnectivityError extends Error {}

export function fetchTransport(baseUrl = ""): Transport {
  return async (path, init) => {
    let resp: Response;
    try {
      resp = await fetch(baseUrl + path, {
        method: init?.method ?? "GET",
        headers: init?.body !== undefined ? { "content-type": "application/json" } : undefined,
        body: init?.body,
      });
    } catch (exc) {
      throw new ConnectivityError(`request failed: ${(exc as Error).message}`);
    }
    return { status: resp.status, body: await resp.text() };
  };
}

async function request<T>(transport: Transport, path: string, body?: string): Promise<T> {
  const resp = await transport(path, body === undefined ? undefined : { method: "POST", body });
  let parsed: unknown;
  try {
    parsed = JSON.parse(resp.body);
  } catch {
    throw new ConnectivityError(`non-JSON response (status ${resp.status})`);
  }
  if (resp.status >= 200 && resp.status < 300) return parsed as T;
  const err = (parsed as ApiErrorBody).error;
  if (err && typeof err.code === "string") {
    throw new ApiError(resp.status, err.code, err.message ?? "", err.field);
  }
  throw new ConnectivityError(`unexpected status ${resp.status}`);
}

export class ApiClient {
  private readonly transport: Transport;

  constructor(transport: Transport) {
    this.transport = transport;
  }

  evaluate(scenarioJson: string): Promise<EvaluateResponse> {
    return request(this.transport, "/api/evaluate", scenarioJson);
  }

  sweep(scenarioJson: string): Promise<SweepResponse> {
    return request(this.transport, "/api/sweep", scenarioJson);
  }

  crossing(scenarioJson: string, rulesetId: string, tolOoms?: number): Promise<CrossingResponse> {
    const tol = tolOoms !== undefined ? `&tol_ooms=${encodeURIComponent(tolOoms)}` : "";
    return request(
      this.transport,
      `/api/crossing?ruleset=${encodeURIComponent(rulesetId)}${tol}`,
      scenarioJson,
    );
  }

  rulesets(): Promise<unknown> {
    return request(this.transport, "/api/rulesets");
  }

  defaults(): Promise<unknown> {
    return request(this.transport, "/api/defaults");
  }
}

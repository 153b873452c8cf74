import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import type { Transport, TransportResponse } from "../src/api.js";

const here = fileURLToPath(new URL(".", import.meta.url));

export function fixtureText(name: string): string {
  return readFileSync(`${here}/fixtures/${name}`, "utf-8");
}

export function fixture<T = any>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

/** The golden scenario files the CLI ships with. */
export const GOLDENS = [
  "inference-deployment",
  "finetune-threshold",
  "distill-frontier",
  "expansion-dispute",
  "sb1047-frontier",
] as const;

export function goldenText(stem: string): string {
  return readFileSync(`${here}/../../scenarios/${stem}.json`, "utf-8");
}

export interface RecordedCall {
  path: string;
  method: string;
  body?: string;
}

/**
 * Transport stub: routes each request through a handler and records every
 * call, so tests can assert what went over the wire.
 */
export function interceptTransport(
  handler: (call: RecordedCall) => TransportResponse | Promise<TransportResponse>,
): { transport: Transport; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const transport: Transport = async (path, init) => {
    const call: RecordedCall = { path, method: init?.method ?? "GET" };
    if (init?.body !== undefined) call.body = init.body;
    calls.push(call);
    return handler(call);
  };
  return { transport, calls };
}

export function ok(bodyDoc: unknown): TransportResponse {
  return { status: 200, body: JSON.stringify(bodyDoc) };
}

/** Shared test utilities: fixture loading, fetch stubbing, bbox parsing. */

import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import type { Bbox } from "../src/types.js";

// vitest's jsdom transform rewrites import.meta.url, so anchor on the
// package root (vitest runs with cwd at the config file's directory)
function fixturePath(name: string): string {
  return resolve(process.cwd(), "tests", "fixtures", name);
}

export function fixtureBytes(name: string): Uint8Array {
  return new Uint8Array(readFileSync(fixturePath(name)));
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(readFileSync(fixturePath(name), "utf-8")) as T;
}

/** Parse the `min_lat,min_lon,max_lat,max_lon` wire form used in fixtures. */
export function wireBbox(wire: string): Bbox {
  const parts = wire.split(",").map(Number) as [number, number, number, number];
  return { minLat: parts[0], minLon: parts[1], maxLat: parts[2], maxLon: parts[3] };
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (reason?: unknown) => void;
}

export function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (reason?: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

/** Strip volatile wrappers so server JSON and parsed snapshots compare 1:1. */
export function plain<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

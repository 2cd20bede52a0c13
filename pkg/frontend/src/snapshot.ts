/**
 * Parser for the v1 offline snapshot format served by GET /snapshot.
 *
 * Layout: a header line `wifiscout-snapshot v1 <generated_at> <bbox|all>`
 * followed by one tab-separated entry per AP (15 fields, strictly
 * ascending ap_id), each line ending in `\n`. Absent optionals are empty
 * strings; string fields escape `\` `\t` `\n` `\r`. The parser accepts
 * exactly what the server emits and rejects everything else with the
 * byte offset of the offending line.
 */

import type { ApSummary, Bbox, NetMetrics, PlaceTag } from "./types.js";

const MAGIC = "wifiscout-snapshot";
const FORMAT_VERSION = 1;
const N_FIELDS = 15;

export class MalformedSnapshot extends Error {
  readonly offset: number;

  constructor(message: string, offset: number) {
    super(`${message} (byte ${offset})`);
    this.name = "MalformedSnapshot";
    this.offset = offset;
  }
}

export class UnsupportedVersion extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UnsupportedVersion";
  }
}

export interface Snapshot {
  formatVersion: number;
  generatedAt: number;
  bbox: Bbox | null; // null when the export covered everything ("all")
  entries: ApSummary[];
}

const ESCAPES: Record<string, string> = { "\\": "\\", t: "\t", n: "\n", r: "\r" };

function unescapeField(s: string, offset: number): string {
  if (!s.includes("\\")) return s;
  let out = "";
  let i = 0;
  while (i < s.length) {
    const c = s[i]!;
    if (c !== "\\") {
      out += c;
      i += 1;
      continue;
    }
    if (i + 1 >= s.length) {
      throw new MalformedSnapshot("dangling backslash in string field", offset);
    }
    const decoded = ESCAPES[s[i + 1]!];
    if (decoded === undefined) {
      throw new MalformedSnapshot(`bad escape \\${s[i + 1]} in string field`, offset);
    }
    out += decoded;
    i += 2;
  }
  return out;
}

const INT_RE = /^[+-]?[0-9]+$/;
const FLOAT_RE = /^[+-]?([0-9]+\.?[0-9]*|\.[0-9]+)([eE][+-]?[0-9]+)?$/;

function parseNum(
  token: string,
  offset: number,
  field: string,
  wantInt = false,
): number | null {
  if (token === "") return null;
  if (wantInt) {
    if (!INT_RE.test(token)) {
      throw new MalformedSnapshot(`bad number in ${field}: ${JSON.stringify(token)}`, offset);
    }
    return Number(token);
  }
  if (!INT_RE.test(token) && !FLOAT_RE.test(token)) {
    throw new MalformedSnapshot(`bad number in ${field}: ${JSON.stringify(token)}`, offset);
  }
  return Number(token);
}

function parseEntry(line: string, offset: number): ApSummary {
  const raw = line.split("\t");
  if (raw.length !== N_FIELDS) {
    throw new MalformedSnapshot(
      `expected ${N_FIELDS} tab-separated fields, got ${raw.length}`,
      offset,
    );
  }

  const apId = unescapeField(raw[0]!, offset);
  const ssid = unescapeField(raw[1]!, offset);
  if (!apId || !ssid) {
    throw new MalformedSnapshot("ap_id and ssid must be non-empty", offset);
  }
  const lat = parseNum(raw[2]!, offset, "lat");
  const lon = parseNum(raw[3]!, offset, "lon");
  if (lat === null || lon === null) {
    throw new MalformedSnapshot("lat/lon must be present", offset);
  }

  const street = unescapeField(raw[4]!, offset);
  const floor = unescapeField(raw[5]!, offset);
  const room = unescapeField(raw[6]!, offset);
  let place: PlaceTag | null;
  if (street) {
    place = { street_address: street, floor: floor || null, room: room || null };
  } else if (floor || room) {
    throw new MalformedSnapshot("floor/room present without street_address", offset);
  } else {
    place = null;
  }

  const reviewCount = parseNum(raw[7]!, offset, "review_count", true);
  if (reviewCount === null || reviewCount < 0) {
    throw new MalformedSnapshot(`bad review_count: ${JSON.stringify(raw[7])}`, offset);
  }
  const meanRating = parseNum(raw[8]!, offset, "mean_rating");
  if ((meanRating === null) !== (reviewCount === 0)) {
    throw new MalformedSnapshot(
      "mean_rating must be present exactly when review_count > 0",
      offset,
    );
  }

  const metricTokens = raw.slice(9, 13);
  let metrics: NetMetrics | null;
  if (metricTokens.every((t) => t === "")) {
    metrics = null;
  } else if (metricTokens.every((t) => t !== "")) {
    metrics = {
      rssi_dbm: parseNum(raw[9]!, offset, "rssi_dbm", true)!,
      link_speed_mbps: parseNum(raw[10]!, offset, "link_speed_mbps")!,
      upload_mbps: parseNum(raw[11]!, offset, "upload_mbps")!,
      download_mbps: parseNum(raw[12]!, offset, "download_mbps")!,
    };
  } else {
    throw new MalformedSnapshot("metrics fields must be all present or all absent", offset);
  }

  const latestReviewAt = parseNum(raw[13]!, offset, "latest_review_at", true);
  const owner = unescapeField(raw[14]!, offset) || null;

  // bssid and source are recoverable from the id shape
  const external = apId.startsWith("ext:");
  return {
    ap: {
      ap_id: apId,
      bssid: external ? null : apId,
      ssid,
      location: { lat, lon },
      place,
      source: external ? "external" : "crowdsensed",
    },
    review_count: reviewCount,
    mean_rating: meanRating,
    latest_metrics: metrics,
    latest_review_at: latestReviewAt,
    owner_user_id: owner,
  };
}

function parseHeader(line: string): { generatedAt: number; bbox: Bbox | null } {
  const parts = line.split(" ");
  if (parts.length !== 4 || parts[0] !== MAGIC) {
    throw new MalformedSnapshot(`bad snapshot header: ${JSON.stringify(line)}`, 0);
  }
  const [, versionToken, generatedToken, bboxToken] = parts as [string, string, string, string];
  if (!/^v[0-9]+$/.test(versionToken)) {
    throw new MalformedSnapshot(`bad version token: ${JSON.stringify(versionToken)}`, 0);
  }
  const version = Number(versionToken.slice(1));
  if (version !== FORMAT_VERSION) {
    throw new UnsupportedVersion(
      `snapshot format v${version} not supported (want v${FORMAT_VERSION})`,
    );
  }
  if (!INT_RE.test(generatedToken)) {
    throw new MalformedSnapshot(`bad generated_at: ${JSON.stringify(generatedToken)}`, 0);
  }
  const generatedAt = Number(generatedToken);
  if (bboxToken === "all") {
    return { generatedAt, bbox: null };
  }
  const nums = bboxToken.split(",");
  if (nums.length !== 4) {
    throw new MalformedSnapshot(`bad bbox token: ${JSON.stringify(bboxToken)}`, 0);
  }
  const bounds = nums.map((n) => (FLOAT_RE.test(n) || INT_RE.test(n) ? Number(n) : NaN));
  if (bounds.some((b) => Number.isNaN(b))) {
    throw new MalformedSnapshot(`bad bbox token: ${JSON.stringify(bboxToken)}`, 0);
  }
  return {
    generatedAt,
    bbox: { minLat: bounds[0]!, minLon: bounds[1]!, maxLat: bounds[2]!, maxLon: bounds[3]! },
  };
}

/** Byte index of the first invalid UTF-8 sequence start; -1 if clean. */
function firstInvalidUtf8(data: Uint8Array): number {
  let i = 0;
  while (i < data.length) {
    const b = data[i]!;
    if (b < 0x80) {
      i += 1;
      continue;
    }
    let extra: number;
    let min: number;
    if ((b & 0xe0) === 0xc0) {
      extra = 1;
      min = 0x80;
    } else if ((b & 0xf0) === 0xe0) {
      extra = 2;
      min = 0x800;
    } else if ((b & 0xf8) === 0xf0) {
      extra = 3;
      min = 0x10000;
    } else {
      return i;
    }
    if (i + extra >= data.length) return i;
    let cp = b & (0x3f >> extra);
    for (let k = 1; k <= extra; k += 1) {
      const c = data[i + k]!;
      if ((c & 0xc0) !== 0x80) return i;
      cp = (cp << 6) | (c & 0x3f);
    }
    if (cp < min || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return i;
    i += extra + 1;
  }
  return -1;
}

const encoder = new TextEncoder();

/**
 * Parse snapshot bytes, verifying structure and entry ordering.
 *
 * Throws UnsupportedVersion for a different format version and
 * MalformedSnapshot (with the byte offset of the offending line) for
 * everything else.
 */
export function parseSnapshot(data: Uint8Array): Snapshot {
  let text: string;
  try {
    text = new TextDecoder("utf-8", { fatal: true }).decode(data);
  } catch {
    throw new MalformedSnapshot("not valid UTF-8", Math.max(firstInvalidUtf8(data), 0));
  }
  if (!text.endsWith("\n")) {
    throw new MalformedSnapshot("truncated file: missing final newline", data.length);
  }

  const lines = text.slice(0, -1).split("\n");
  const headerLine = lines[0]!;
  const { generatedAt, bbox } = parseHeader(headerLine);

  const entries: ApSummary[] = [];
  let offset = encoder.encode(headerLine).length + 1;
  let prevId: string | null = null;
  for (const line of lines.slice(1)) {
    const entry = parseEntry(line, offset);
    if (prevId !== null && entry.ap.ap_id <= prevId) {
      throw new MalformedSnapshot(
        `entries not strictly ascending by ap_id at ${JSON.stringify(entry.ap.ap_id)}`,
        offset,
      );
    }
    prevId = entry.ap.ap_id;
    entries.push(entry);
    offset += encoder.encode(line).length + 1;
  }

  return { formatVersion: FORMAT_VERSION, generatedAt, bbox, entries };
}

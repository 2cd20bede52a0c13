/**
 * End-to-end flow against a real server process:
 * register, first review earns +10, a repeat within the hour earns +0,
 * the ownership map shows the reviewer's avatar, and offline search
 * over a downloaded snapshot matches the live region query.
 */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, beforeEach, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { queryEntries } from "../src/query.js";
import { parseSnapshot, type Snapshot } from "../src/snapshot.js";
import { newViewState, type ViewState } from "../src/state.js";
import { ClusterMapScreen } from "../src/screens/clusterMap.js";
import { OfflineSearchScreen } from "../src/screens/offlineSearch.js";
import { OwnershipMapScreen } from "../src/screens/ownershipMap.js";
import { ReviewFormScreen } from "../src/screens/reviewForm.js";
import type { ApSummary, Bbox, Viewport } from "../src/types.js";
import { plain } from "./helpers.js";

const PORT = 8911 + (process.pid % 53);
const BASE = `http://127.0.0.1:${PORT}`;
const FULL: Bbox = { minLat: 1.2, minLon: 103.7, maxLat: 1.45, maxLon: 103.95 };
const VIEWPORT: Viewport = { bbox: FULL, zoom: 12 };

const SEED_CSV = `ssid,lat,lon,street_address,floor,room,operator
KopiWiFi,1.3040,103.8500,77 Kopi Rd,,,KopiCo
LibraryNet,1.2966,103.8520,101 Stamford Rd,3,Reading Room,GovNet
`;

let workdir: string;
let server: ChildProcess;
let serverDown = false;

function stopServer(): Promise<void> {
  if (serverDown) return Promise.resolve();
  serverDown = true;
  return new Promise((resolve) => {
    server.once("exit", () => resolve());
    server.kill("SIGTERM");
  });
}

async function waitReady(): Promise<void> {
  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/api/v1/leaderboard`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error(`server on :${PORT} did not come up`);
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "wifiscout-e2e-"));
  const csv = join(workdir, "seed.csv");
  writeFileSync(csv, SEED_CSV);
  execFileSync("wifiscout", ["import", "--data-dir", join(workdir, "data"), csv]);
  server = spawn(
    "wifiscout",
    ["serve", "--data-dir", join(workdir, "data"), "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitReady();
});

afterAll(async () => {
  await stopServer();
  rmSync(workdir, { recursive: true, force: true });
});

const api = new ApiClient(BASE);
const base = Math.floor(Date.now() / 1000);
let clock = base;
const state: ViewState = newViewState(VIEWPORT);

let kopi: ApSummary;
let library: ApSummary;
let snap: Snapshot;
let liveFullAnswer: ApSummary[];

let container: HTMLElement;
beforeEach(() => {
  document.body.innerHTML = "";
  container = document.createElement("div");
  document.body.append(container);
});

describe("live advisory flow", () => {
  it("registers two users and finds the imported hotspots", async () => {
    const reward = await api.register({
      user_id: "remy",
      display_name: "Remy",
      avatar_ref: "avatars/remy.png",
      at: base,
    });
    expect(reward.rule_case).toBe("registration");
    await api.register({
      user_id: "seeder",
      display_name: "Seeder",
      avatar_ref: "avatars/seeder.png",
      at: base,
    });
    state.sessionUserId = "remy";

    const aps = await api.listAps(FULL);
    kopi = aps.find((s) => s.ap.ssid === "KopiWiFi")!;
    library = aps.find((s) => s.ap.ssid === "LibraryNet")!;
    expect(kopi.ap.ap_id.startsWith("ext:")).toBe(true);
    expect(kopi.owner_user_id).toBeNull();
  });

  it("first review through the form shows +10, a repeat within the hour +0", async () => {
    const form = new ReviewFormScreen(container, api, state, () => clock);
    form.setApId(kopi.ap.ap_id);

    // rating unset: blocked client-side before any request
    expect(await form.submit()).toBeNull();
    expect(container.querySelector(".form-error")!.textContent).toContain("rating");

    clock = base + 10;
    form.setRating(5);
    const first = await form.submit();
    expect(first?.points).toBe(10);
    expect(first?.rule_case).toBe("first_review");
    expect(container.querySelector(".reward-banner")!.textContent).toBe("+10 first review!");

    clock = base + 10 + 3500; // 58 minutes later
    form.setRating(4);
    const repeat = await form.submit();
    expect(repeat?.points).toBe(0);
    expect(repeat?.rule_case).toBe("suppressed_review");
    expect(container.querySelector(".reward-banner")!.textContent).toBe("+0 too soon");
  });

  it("shows the reviewer's avatar on the ownership map", async () => {
    const screen = new OwnershipMapScreen(container, api);
    await screen.show(VIEWPORT);
    const marker = container.querySelector(`[data-ap-id="${kopi.ap.ap_id}"]`)!;
    expect(marker.tagName).toBe("IMG");
    expect(marker.getAttribute("data-owner")).toBe("remy");
    expect(marker.getAttribute("src")).toBe("avatars/remy.png");
    // the other hotspot is still unowned
    expect(
      container.querySelector(`[data-ap-id="${library.ap.ap_id}"]`)!.classList.contains(
        "neutral-pin",
      ),
    ).toBe(true);
  });

  it("an overtaking review flips the avatar on refresh", async () => {
    clock = base + 4000;
    await api.submitReview({
      user_id: "seeder",
      ap_id: library.ap.ap_id,
      rating: 3,
      at: clock,
    });
    const screen = new OwnershipMapScreen(container, api);
    await screen.show(VIEWPORT);
    const ownerOf = () =>
      container.querySelector(`[data-ap-id="${library.ap.ap_id}"]`)!.getAttribute("data-owner");
    expect(ownerOf()).toBe("seeder");

    // a tie keeps the earlier attainer...
    clock = base + 4001;
    await api.submitReview({ user_id: "remy", ap_id: library.ap.ap_id, rating: 5, at: clock });
    await screen.show(VIEWPORT);
    expect(ownerOf()).toBe("seeder");

    // ...until a spaced repeat pushes the challenger past them
    clock = base + 4001 + 21600;
    const spaced = await api.submitReview({
      user_id: "remy",
      ap_id: library.ap.ap_id,
      rating: 4,
      at: clock,
    });
    expect(spaced.rule_case).toBe("spaced_review");
    expect(spaced.points).toBe(5);
    await screen.show(VIEWPORT);
    expect(ownerOf()).toBe("remy");
  });

  it("downloaded snapshot answers region queries like the live route", async () => {
    const bytes = await api.downloadSnapshot();
    snap = parseSnapshot(bytes);
    state.cachedSnapshot = snap;
    expect(snap.generatedAt).toBe(clock); // nothing written since the last review

    const point: Bbox = {
      minLat: kopi.ap.location.lat,
      minLon: kopi.ap.location.lon,
      maxLat: kopi.ap.location.lat,
      maxLon: kopi.ap.location.lon,
    };
    const south: Bbox = { minLat: 1.25, minLon: 103.7, maxLat: 1.30, maxLon: 103.95 };
    for (const [bbox, minRating] of [
      [FULL, undefined],
      [FULL, 4],
      [point, undefined],
      [south, undefined],
      [south, 4.5],
    ] as [Bbox, number | undefined][]) {
      const live = await api.listAps(bbox, minRating);
      const offline = queryEntries(snap.entries, bbox, minRating ?? null);
      expect(plain(offline)).toEqual(plain(live));
    }
    liveFullAnswer = await api.listAps(FULL);
    expect(liveFullAnswer.length).toBe(2);
  });

  it("cluster markers track the live /clusters payload across zooms", async () => {
    const screen = new ClusterMapScreen(container, api);
    for (const zoom of [12, 16]) {
      const viewport = { bbox: FULL, zoom };
      await screen.show(viewport);
      const payload = await api.clusters(FULL, zoom);
      expect(container.querySelectorAll(".marker")).toHaveLength(payload.length);
    }
  });

  it("keeps answering offline after the server goes away", async () => {
    await stopServer();

    const map = new ClusterMapScreen(container, api);
    await map.show(VIEWPORT);
    expect(container.querySelector(".offline-banner")).not.toBeNull();

    const pane = document.createElement("div");
    document.body.append(pane);
    const offline = new OfflineSearchScreen(pane, state);
    offline.show();
    const hits = offline.search(FULL);
    expect(plain(hits)).toEqual(plain(liveFullAnswer));

    const form = new ReviewFormScreen(container, api, state, () => clock + 10);
    form.setApId(kopi.ap.ap_id);
    form.setRating(2);
    expect(await form.submit()).toBeNull();
    expect(container.querySelector(".form-error")!.textContent).toContain("offline");
  });
});

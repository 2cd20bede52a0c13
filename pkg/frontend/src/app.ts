/**
 * App shell: mode switching, session handling, viewport controls, and
 * snapshot download. Served by `wifiscout serve --ui-dir` next to the
 * API, so the client talks to its own origin.
 */

import { ApiClient, ApiError, NetworkError } from "./api.js";
import { clear, el } from "./dom.js";
import { parseSnapshot } from "./snapshot.js";
import type { Mode, ViewState } from "./state.js";
import { newViewState } from "./state.js";
import { ClusterMapScreen } from "./screens/clusterMap.js";
import { LeaderboardScreen } from "./screens/leaderboard.js";
import { OfflineSearchScreen } from "./screens/offlineSearch.js";
import { OwnershipMapScreen } from "./screens/ownershipMap.js";
import { ReviewFormScreen } from "./screens/reviewForm.js";
import type { Bbox } from "./types.js";

const MODES: { mode: Mode; label: string }[] = [
  { mode: "cluster_map", label: "Hotspots" },
  { mode: "ownership_map", label: "Owners" },
  { mode: "review_form", label: "Review" },
  { mode: "leaderboard", label: "Leaderboard" },
  { mode: "offline_search", label: "Offline search" },
];

// city-sized default view
const HOME_BBOX: Bbox = { minLat: 1.25, minLon: 103.78, maxLat: 1.38, maxLon: 103.92 };

export class App {
  readonly state: ViewState;
  private readonly api: ApiClient;
  private readonly screens: Record<Mode, HTMLElement> = {
    cluster_map: el("section", { class: "screen" }),
    ownership_map: el("section", { class: "screen" }),
    review_form: el("section", { class: "screen" }),
    leaderboard: el("section", { class: "screen" }),
    offline_search: el("section", { class: "screen" }),
  };
  private readonly clusterMap: ClusterMapScreen;
  private readonly ownershipMap: OwnershipMapScreen;
  private readonly reviewForm: ReviewFormScreen;
  private readonly leaderboard: LeaderboardScreen;
  private readonly offlineSearch: OfflineSearchScreen;
  private readonly sessionLabel: HTMLElement;

  constructor(root: HTMLElement, api = new ApiClient()) {
    this.api = api;
    this.state = newViewState({ bbox: { ...HOME_BBOX }, zoom: 12 });

    const nav = el("nav", { class: "mode-nav" });
    for (const { mode, label } of MODES) {
      const button = el("button", { "data-mode": mode }, label);
      button.addEventListener("click", () => void this.setMode(mode));
      nav.append(button);
    }

    this.sessionLabel = el("span", { class: "session-label" }, "not signed in");
    const session = this.buildSessionBar();
    const viewportBar = this.buildViewportBar();

    const main = el("main", { class: "screens" });
    for (const mode of Object.keys(this.screens) as Mode[]) {
      main.append(this.screens[mode]);
    }

    root.append(nav, session, viewportBar, main);

    this.clusterMap = new ClusterMapScreen(this.screens.cluster_map, this.api);
    this.ownershipMap = new OwnershipMapScreen(this.screens.ownership_map, this.api);
    this.reviewForm = new ReviewFormScreen(this.screens.review_form, this.api, this.state);
    this.leaderboard = new LeaderboardScreen(this.screens.leaderboard, this.api);
    this.offlineSearch = new OfflineSearchScreen(
      this.screens.offline_search,
      this.state,
      () => void this.downloadSnapshot(),
    );
  }

  private buildSessionBar(): HTMLElement {
    const userInput = el("input", { placeholder: "user id" });
    const nameInput = el("input", { placeholder: "display name" });
    const registerButton = el("button", {}, "Register");
    registerButton.addEventListener("click", () => {
      const userId = userInput.value.trim();
      const displayName = nameInput.value.trim() || userId;
      if (!userId) return;
      void this.register(userId, displayName);
    });
    return el("div", { class: "session-bar" }, userInput, nameInput, registerButton, this.sessionLabel);
  }

  private buildViewportBar(): HTMLElement {
    const bar = el("div", { class: "viewport-bar" });
    const moves: [string, number, number][] = [
      ["←", 0, -1],
      ["→", 0, 1],
      ["↑", 1, 0],
      ["↓", -1, 0],
    ];
    for (const [label, dLat, dLon] of moves) {
      const button = el("button", {}, label);
      button.addEventListener("click", () => void this.pan(dLat, dLon));
      bar.append(button);
    }
    for (const [label, delta] of [["+", 1], ["−", -1]] as [string, number][]) {
      const button = el("button", {}, label);
      button.addEventListener("click", () => void this.zoomBy(delta));
      bar.append(button);
    }
    return bar;
  }

  async register(userId: string, displayName: string): Promise<void> {
    try {
      await this.api.register({ user_id: userId, display_name: displayName });
    } catch (exc) {
      // an already-registered id is fine to sign back in with
      if (!(exc instanceof ApiError && exc.code === "duplicate_user")) {
        this.sessionLabel.textContent =
          exc instanceof ApiError ? `${exc.code}: ${exc.message}` : "offline: could not register";
        return;
      }
    }
    this.state.sessionUserId = userId;
    this.sessionLabel.textContent = `signed in as ${userId}`;
  }

  async setMode(mode: Mode): Promise<void> {
    this.state.mode = mode;
    for (const m of Object.keys(this.screens) as Mode[]) {
      this.screens[m].style.display = m === mode ? "" : "none";
    }
    await this.refresh();
  }

  /** Redraw whatever the current mode shows. */
  async refresh(): Promise<void> {
    switch (this.state.mode) {
      case "cluster_map":
        await this.clusterMap.show(this.state.viewport);
        break;
      case "ownership_map":
        await this.ownershipMap.show(this.state.viewport);
        break;
      case "leaderboard":
        await this.leaderboard.show();
        break;
      case "offline_search":
        this.offlineSearch.show();
        break;
      case "review_form":
        break; // the form keeps its own state between visits
    }
  }

  async pan(dLat: number, dLon: number): Promise<void> {
    const b = this.state.viewport.bbox;
    const latStep = (b.maxLat - b.minLat) / 4;
    const lonStep = (b.maxLon - b.minLon) / 4;
    this.state.viewport.bbox = {
      minLat: b.minLat + dLat * latStep,
      maxLat: b.maxLat + dLat * latStep,
      minLon: b.minLon + dLon * lonStep,
      maxLon: b.maxLon + dLon * lonStep,
    };
    await this.refresh();
  }

  async zoomBy(delta: number): Promise<void> {
    const z = this.state.viewport.zoom + delta;
    this.state.viewport.zoom = Math.min(20, Math.max(1, z));
    await this.refresh();
  }

  async downloadSnapshot(): Promise<void> {
    try {
      const bytes = await this.api.downloadSnapshot();
      this.state.cachedSnapshot = parseSnapshot(bytes);
    } catch (exc) {
      if (exc instanceof NetworkError || exc instanceof ApiError) {
        const pane = this.screens.offline_search;
        clear(pane);
        pane.append(el("p", { class: "download-error" }, "snapshot download failed; try again while online"));
        return;
      }
      throw exc;
    }
    if (this.state.mode === "offline_search") {
      this.offlineSearch.show();
      this.offlineSearch.search(this.state.viewport.bbox);
    }
  }
}

export function mount(root: HTMLElement): App {
  const app = new App(root);
  void app.setMode("cluster_map");
  return app;
}

// browser entry point; tests construct App directly instead
const rootNode = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootNode) {
  mount(rootNode);
}

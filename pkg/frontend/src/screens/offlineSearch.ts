/**
 * Offline region search against the cached snapshot.
 *
 * This screen holds no API client at all: once a snapshot is cached,
 * searching is pure computation over its entries and issues zero
 * network requests. Without a snapshot it only prompts for a download,
 * which the app shell performs.
 */

import { clear, el } from "../dom.js";
import { queryEntries } from "../query.js";
import type { ViewState } from "../state.js";
import { canSearchOffline } from "../state.js";
import type { ApSummary, Bbox } from "../types.js";

export function renderResults(container: HTMLElement, hits: readonly ApSummary[]): void {
  clear(container);
  if (hits.length === 0) {
    container.append(el("p", { class: "empty" }, "no hotspots in this region"));
    return;
  }
  const list = el("ul", { class: "search-results" });
  for (const hit of hits) {
    const rating =
      hit.mean_rating === null ? "unrated" : `★ ${hit.mean_rating.toFixed(2)}`;
    const address = hit.ap.place?.street_address ?? "";
    const item = el(
      "li",
      { class: "search-result", "data-ap-id": hit.ap.ap_id },
      el("span", { class: "ssid" }, hit.ap.ssid),
      el("span", { class: "rating" }, rating),
      el("span", { class: "address" }, address),
    );
    if (hit.owner_user_id) {
      item.append(el("span", { class: "owner" }, `owned by ${hit.owner_user_id}`));
    }
    list.append(item);
  }
  container.append(list);
}

export class OfflineSearchScreen {
  private readonly results: HTMLElement;

  constructor(
    private readonly container: HTMLElement,
    private readonly state: ViewState,
    private readonly onDownloadRequest?: () => void,
  ) {
    this.results = el("div", { class: "results" });
  }

  /** Prompt for a download, or show the cached snapshot's vintage. */
  show(): void {
    clear(this.container);
    if (!canSearchOffline(this.state)) {
      const button = el("button", { class: "download-snapshot" }, "Download snapshot");
      button.addEventListener("click", () => this.onDownloadRequest?.());
      this.container.append(
        el(
          "div",
          { class: "download-prompt" },
          el("p", {}, "No snapshot downloaded yet. Grab one while online to search offline."),
          button,
        ),
      );
      return;
    }
    const snap = this.state.cachedSnapshot!;
    this.container.append(
      el(
        "p",
        { class: "snapshot-vintage" },
        `searching a snapshot of ${snap.entries.length} hotspots from t=${snap.generatedAt}`,
      ),
      this.results,
    );
  }

  /** Pure client-side search; never touches the network. */
  search(bbox: Bbox, minRating: number | null = null): ApSummary[] {
    if (!canSearchOffline(this.state)) {
      this.show();
      return [];
    }
    const hits = queryEntries(this.state.cachedSnapshot!.entries, bbox, minRating);
    renderResults(this.results, hits);
    return hits;
  }
}

/**
 * Ownership map: each owned AP shows its top contributor's avatar,
 * unowned APs show a neutral pin. Owners come from GET /ownership;
 * marker positions come from GET /aps over the same viewport.
 */

import type { ApiClient } from "../api.js";
import { NetworkError } from "../api.js";
import { clear, el } from "../dom.js";
import { StaleGuard } from "../state.js";
import type { ApSummary, OwnershipRow, Viewport } from "../types.js";
import { clearOfflineBanner, showOfflineBanner } from "./banner.js";
import { placeMarker } from "./projection.js";

export function renderOwnershipMarkers(
  pane: HTMLElement,
  rows: readonly OwnershipRow[],
  summaries: readonly ApSummary[],
  viewport: Viewport,
): HTMLElement[] {
  clear(pane);
  const locations = new Map(summaries.map((s) => [s.ap.ap_id, s.ap.location]));
  const markers: HTMLElement[] = [];
  for (const row of rows) {
    const location = locations.get(row.ap_id);
    if (!location) continue; // AP left the viewport between the two fetches
    let marker: HTMLElement;
    if (row.owner_user_id === null) {
      marker = el("div", {
        class: "neutral-pin",
        "data-ap-id": row.ap_id,
        title: "unowned hotspot",
      });
    } else if (row.avatar_ref !== null) {
      marker = el("img", {
        class: "avatar-marker",
        "data-ap-id": row.ap_id,
        "data-owner": row.owner_user_id,
        src: row.avatar_ref,
        alt: `owned by ${row.owner_user_id}`,
      });
    } else {
      // owner without an avatar image: fall back to their initial
      marker = el(
        "div",
        { class: "avatar-marker avatar-initial", "data-ap-id": row.ap_id, "data-owner": row.owner_user_id },
        row.owner_user_id.slice(0, 1).toUpperCase(),
      );
    }
    placeMarker(marker, viewport.bbox, location);
    pane.append(marker);
    markers.push(marker);
  }
  return markers;
}

export class OwnershipMapScreen {
  private readonly guard = new StaleGuard();
  private readonly pane: HTMLElement;

  constructor(
    private readonly container: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.pane = el("div", { class: "map-pane" });
    container.append(this.pane);
  }

  async show(viewport: Viewport): Promise<void> {
    const ticket = this.guard.issue();
    let rows: OwnershipRow[];
    let summaries: ApSummary[];
    try {
      [rows, summaries] = await Promise.all([
        this.api.ownership(viewport.bbox),
        this.api.listAps(viewport.bbox),
      ]);
    } catch (exc) {
      if (exc instanceof NetworkError && this.guard.isCurrent(ticket)) {
        showOfflineBanner(this.container);
        return;
      }
      if (this.guard.isCurrent(ticket)) throw exc;
      return;
    }
    if (!this.guard.isCurrent(ticket)) return;
    clearOfflineBanner(this.container);
    renderOwnershipMarkers(this.pane, rows, summaries, viewport);
  }
}

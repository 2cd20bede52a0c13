/**
 * Clustered hotspot map: one marker per cluster returned by
 * GET /clusters, labeled with the cluster size. Panning or zooming
 * refetches; the latest viewport wins and stale responses are dropped.
 */

import type { ApiClient } from "../api.js";
import { NetworkError } from "../api.js";
import { clear, el } from "../dom.js";
import { StaleGuard } from "../state.js";
import type { Cluster, Viewport } from "../types.js";
import { clearOfflineBanner, showOfflineBanner } from "./banner.js";
import { placeMarker } from "./projection.js";

/** Pure render: returns the marker elements it added to the pane. */
export function renderClusterMarkers(
  pane: HTMLElement,
  clusters: readonly Cluster[],
  viewport: Viewport,
): HTMLElement[] {
  clear(pane);
  const markers: HTMLElement[] = [];
  for (const cluster of clusters) {
    const singleton = cluster.size === 1;
    const marker = el(
      "div",
      {
        class: singleton ? "marker marker-singleton" : "marker",
        "data-cluster-id": cluster.cluster_id,
        "data-size": String(cluster.size),
        title: `${cluster.size} hotspot${singleton ? "" : "s"}`,
      },
      // singletons stay unlabeled; the dot itself is the AP
      singleton ? "" : String(cluster.size),
    );
    placeMarker(marker, viewport.bbox, cluster.centroid);
    pane.append(marker);
    markers.push(marker);
  }
  return markers;
}

export class ClusterMapScreen {
  private readonly guard = new StaleGuard();
  private readonly pane: HTMLElement;

  constructor(
    private readonly container: HTMLElement,
    private readonly api: ApiClient,
  ) {
    this.pane = el("div", { class: "map-pane" });
    container.append(this.pane);
  }

  /** Fetch clusters for the viewport and redraw. Called on every pan/zoom. */
  async show(viewport: Viewport): Promise<void> {
    const ticket = this.guard.issue();
    let clusters: Cluster[];
    try {
      clusters = await this.api.clusters(viewport.bbox, viewport.zoom);
    } catch (exc) {
      if (exc instanceof NetworkError && this.guard.isCurrent(ticket)) {
        showOfflineBanner(this.container);
        return;
      }
      if (this.guard.isCurrent(ticket)) throw exc;
      return;
    }
    if (!this.guard.isCurrent(ticket)) return; // a newer viewport took over
    clearOfflineBanner(this.container);
    renderClusterMarkers(this.pane, clusters, viewport);
  }
}

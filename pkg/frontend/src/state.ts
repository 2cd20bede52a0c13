/**
 * Client view state and the stale-response guard.
 *
 * The app is single-threaded; network fetches are asynchronous and the
 * latest viewport wins. Each screen takes a ticket before awaiting and
 * drops its response if a newer ticket was issued meanwhile.
 */

import type { Snapshot } from "./snapshot.js";
import type { Viewport } from "./types.js";

export type Mode =
  | "cluster_map"
  | "ownership_map"
  | "review_form"
  | "leaderboard"
  | "offline_search";

export interface ViewState {
  mode: Mode;
  viewport: Viewport;
  sessionUserId: string | null;
  cachedSnapshot: Snapshot | null;
}

export function newViewState(viewport: Viewport): ViewState {
  return { mode: "cluster_map", viewport, sessionUserId: null, cachedSnapshot: null };
}

/** Offline search is usable with no network iff a snapshot is cached. */
export function canSearchOffline(state: ViewState): boolean {
  return state.cachedSnapshot !== null;
}

export class StaleGuard {
  private latest = 0;

  /** Take a ticket for a fetch about to start; invalidates older tickets. */
  issue(): number {
    this.latest += 1;
    return this.latest;
  }

  /** True while no newer ticket has been issued. */
  isCurrent(ticket: number): boolean {
    return ticket === this.latest;
  }
}
